#pragma once

#include <string>
#include <vector>

#include "wie/core.hpp"
#include "wie/forcing.hpp"

namespace wie {

struct WindowSup {
  double T = 0.0;
  double sup = 0.0;  // sampled sup of ||f(t,.)||_{L2} on [0, T]
};

struct AdmissibilityReport {
  bool hyp0_ok = true;
  std::vector<WindowSup> windows;

  bool hyp1_ok = true;
  double C_F = 0.0;
  std::vector<double> C_F_eps_mesh;

  bool laplace_ok = true;
  double K_F = 0.0;  // eps_F^{-1} int e^{-t/(2 eps_F)} ||f||^2, infinite when the verdict fails
  double M_F = 0.0;  // M_F(T) at the largest window, infinite when the verdict fails
  std::string envelope;

  double eps_F = 0.0;
  double eps_F_estimate = 0.0;  // heuristic, 0 when no mesh value qualifies
  std::vector<std::string> notes;

  bool admissible() const { return hyp0_ok && hyp1_ok && laplace_ok; }
  std::string json() const;
};

/// Vets a forcing against local boundedness, the small-eps control of
/// F(.,.,0) and Laplace transformability at rate 1/(2 eps_F). The verdict on
/// the last one comes from the declared envelope of ||f(t,.)||^2.
AdmissibilityReport check_hypotheses(const Forcing& forcing, double eps_F, const std::vector<double>& windows,
                                     const SpaceGrid& grid, std::size_t sup_mesh = 10000);

/// Smooth cutoff: 1 on [0, 1], 1 - S5((t-1)/4) on [1, 5], 0 beyond, with
/// S5(y) = 10y^3 - 15y^4 + 6y^5.
double zeta(double t);
double zeta_d1(double t);
double zeta_d2(double t);

/// Sampled max of |zeta'| + |zeta''|.
double zeta_derivative_bound(std::size_t mesh = 10000);

struct SharpnessRow {
  int n = 0;
  double F_value = 0.0;   // F_eps(w_n)
  double inertia = 0.0;   // int e^{-t/eps} eps^2/2 ||w_n''||^2
  double potential = 0.0; // int e^{-t/eps} W(w_n)
  double forcing = 0.0;   // int e^{-t/eps} int F(t, x, w_n) dx
};

struct SharpnessResult {
  std::vector<SharpnessRow> rows;
  bool overflowed = false;  // stopped before n_max because a value left double range
  std::string csv() const;
  std::string dat() const;
};

/// F_eps(w_n) for w_n(t) = (w0 + t w1) zeta(2^{-n} t), n = 0..n_max, with
/// forcing F = eta(t) g(x) v. Throws InputError unless int g w0 > 0, g >= 0
/// and w1 >= 0.
SharpnessResult sharpness_demo(const TimeFactor& eta, const SpatialProfile& g, const InitialData& data,
                               const SpaceGrid& grid, double eps, int n_max, double r = 4.0);

}  // namespace wie
