#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wie/functional.hpp"
#include "wie/kernels.hpp"
#include "wie/minimizer.hpp"
#include "wie/oracle.hpp"

namespace wie {

/// K_eps(t_j) = (1/(2 eps^2)) ||u'(t_j)||^2.
double kinetic_energy(const SpaceTimeField& u, const WieProblem& prob, std::size_t j);

/// int_t^T (s-t) e^{-(s-t)} W(u(s)) ds over the remaining grid.
double forward_potential(const SpaceTimeField& u, const WieProblem& prob, std::size_t j);

/// Nodes whose forward window is long enough: (1 + tau) e^{-tau} <= tail_tol
/// with tau = T_resc - t_j.
std::size_t energy_node_limit(const TimeGrid& grid, double tail_tol);

/// E_eps(t_j) = K_eps(t_j) + forward_potential. Throws RangeError when the
/// truncated kernel mass beyond T_resc exceeds tail_tol.
double approximate_energy(const SpaceTimeField& u, const WieProblem& prob, std::size_t j,
                          double tail_tol = 1e-4);

/// int_0^inf s e^{-s} W(u(s)) ds.
double first_moment_W(const SpaceTimeField& u, const WieProblem& prob);

/// Cumulative integral s -> int_0^s Q_eps, tabulated on a uniform mesh.
class QepsIntegral {
 public:
  QepsIntegral() = default;
  QepsIntegral(const TimeFunction& f_norm, double eps, double s_max, std::size_t mesh = 400);
  /// Q_eps(s), interpolated.
  double value(double s) const;
  /// int_0^s Q_eps.
  double cumulative(double s) const;
  bool zero() const { return zero_; }

 private:
  bool zero_ = true;
  double ds_ = 1.0;
  std::vector<double> q_, cum_;
};

/// Constants of the approximate-energy bound.
struct AppendixConstants {
  double B_bar = 0.0;  // safety_factor * int s e^{-s} W(u)
  double Q = 0.0;      // 1/2 ||w1||^2 + B_bar
  double Q_bar = 0.0;  // Q + 1
  double safety_factor = 2.0;
};

AppendixConstants appendix_constants(const SpaceTimeField& u, const WieProblem& prob,
                                     double safety_factor = 2.0);

struct EnergyReport {
  std::vector<double> times;  // rescaled
  std::vector<double> kinetic;
  std::vector<double> potential;
  std::vector<double> approx_energy;
  std::vector<double> bound_margin;       // Q + (28 + 4 eps t) int_0^{eps t} Q_eps - E_eps(t)
  std::vector<double> inequality_margin;  // sqrt(E(0)) + sqrt((t/2) int_0^t |f|^2) - sqrt(E(t)), t = eps t_j
  AppendixConstants constants;
  double tolerance = 0.0;  // relative slack on the bound
  double min_bound_margin = 0.0;
  double min_inequality_margin = 0.0;
  bool lower_ok = true;  // E_eps >= forward potential at every node
  bool bound_ok = true;
};

/// Per-node margins of the approximate-energy bound on the nodes where
/// E_eps is defined. Negative margins beyond -slack * max(Q, E_eps) fail.
EnergyReport check_appendix_bound(const SpaceTimeField& u, const WieProblem& prob, const TimeFunction& f_norm,
                                  double slack = 0.02, double tail_tol = 1e-4, double safety_factor = 2.0);

struct EnergyInequality {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> rhs;
  std::vector<double> margin;
  double E0 = 0.0;
  double tolerance = 0.0;
  double min_margin = 0.0;
  double fraction_ok = 1.0;
  bool passed = true;
};

/// margin(t) = sqrt(E(0)) + sqrt((t/2) int_0^t f_norm) - sqrt(E(t)) on the
/// grid of w, with E from solution_energy; passes when min margin >= -rel_tol * E(0).
EnergyInequality check_energy_inequality(const SpaceTimeField& w, const TimeFunction& f_norm, double r,
                                         double rel_tol = 0.02);

struct Lemma1Estimates {
  double lhs[3] = {0.0, 0.0, 0.0};
  double rhs[3] = {0.0, 0.0, 0.0};
  bool holds[3] = {true, true, true};
  double margin(int k) const { return rhs[k] - lhs[k]; }
  bool all() const { return holds[0] && holds[1] && holds[2]; }
};

struct TestFunction {
  std::function<double(double)> phi;
  double support_lo = 0.0;
  double support_hi = 0.0;

  /// C-infinity bump exp(1 - 1/(1 - y^2)) on (lo, hi).
  static TestFunction bump(double lo, double hi, double amplitude = 1.0);
  static TestFunction zero();
};

/// Evaluates the three xi-weighted estimates for a minimizer, with
/// xi(t) = int_0^t (t-s) e^s phi(s) ds. Throws InputError when the support of
/// phi is not inside (0, T_resc).
Lemma1Estimates check_lemma1_estimates(const SpaceTimeField& u, const WieProblem& prob, const TestFunction& phi,
                                       const TimeFunction& f_norm, double Q_bar, double slack = 0.02);

/// Template of the problems of an eps sweep.
struct SweepTemplate {
  double r = 4.0;
  double eps_F = 0.45;
  double power_reg = -1.0;
  double T_phys = 1.0;
  double ht = 0.1;  // rescaled time step
  InitialData data;
  SpaceGrid space;
  Forcing forcing;
  MinimizeOptions options;

  WieProblem make(double eps) const;
};

struct SweepRun {
  double eps = 0.0;
  WieProblem problem;
  MinimizeResult result;
  SpaceTimeField w;  // rescaled onto the reference grid
  double l2_error = 0.0;
  double sup_error = 0.0;
};

struct ConvergenceTable {
  std::vector<SweepRun> runs;
  std::vector<double> l2_errors() const;
  bool strictly_decreasing() const;
  /// CSV: eps,l2_error,sup_error,converged,iterations,grad_norm,J
  std::string csv() const;
};

/// Space-time reference w_ref(t, x) sampled on a plain grid.
using ReferenceFn = std::function<double(double, double)>;

/// Minimizes for every eps (in parallel over `jobs` workers), rescales onto
/// the grid of `reference` and reports L2((0,T)xOmega) and sup distances.
ConvergenceTable convergence_study(const SweepTemplate& tmpl, const std::vector<double>& eps_list,
                                   const SpaceTimeField& reference, unsigned jobs = 1);

/// As above with the leapfrog solution of `oracle` as reference.
ConvergenceTable convergence_study(const SweepTemplate& tmpl, const std::vector<double>& eps_list,
                                   const OracleConfig& oracle, unsigned jobs = 1);

/// Discrete L2((0,T) x Omega) distance on a plain grid (trapezoid in time).
double space_time_l2(const SpaceTimeField& a, const SpaceTimeField& b);
double sup_distance(const SpaceTimeField& a, const SpaceTimeField& b);

/// CSV with columns t,K_eps,W,E_eps,margin_tt,margin_energy.
std::string energy_csv(const EnergyReport& report);

}  // namespace wie
