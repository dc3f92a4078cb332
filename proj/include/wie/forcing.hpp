#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wie/core.hpp"
#include "wie/kernels.hpp"

namespace wie {

/// Time factor tau(t) of a separable amplitude b(t,x) = tau(t) g(x).
class TimeFactor {
 public:
  enum class Kind { constant, exp_decay, polynomial, exp_growth, exp_square, tabulated };

  static TimeFactor constant(double value);
  static TimeFactor exp_decay(double amplitude, double rate);   // a e^{-rate t}
  static TimeFactor polynomial(std::vector<double> coeffs);     // sum_k c_k t^k
  static TimeFactor exp_growth(double amplitude, double rate);  // a e^{rate t}
  static TimeFactor exp_square(double amplitude);               // a e^{t^2}
  /// Piecewise linear, held constant beyond the table ends.
  static TimeFactor tabulated(std::vector<double> ts, std::vector<double> vs);

  double operator()(double t) const;
  Kind kind() const { return kind_; }
  GrowthEnvelope envelope() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double amplitude_ = 0.0;
  double rate_ = 0.0;
  std::vector<double> coeffs_, ts_, vs_;
};

/// Nonlinear profile psi with psi(0) = 0 and |psi'| <= 1.
enum class Psi { sine_gordon, sine, tanh };

Psi parse_psi(const std::string& name);
std::string to_string(Psi psi);
double psi_value(Psi psi, double v);
double psi_derivative(Psi psi, double v);

/// Sampling region for the checks applied to custom forcings.
struct ForcingValidationBox {
  double t_max = 5.0;
  double x_min = -1.0;
  double x_max = 1.0;
  double v_max = 3.0;
  std::size_t samples = 1000;
  std::uint64_t seed = 12345;
};

/// The nonhomogeneous term: F(t,x,v), G = dF/dv and f(t,x) = sup_v |G|.
class Forcing {
 public:
  enum class Kind { zero, linear, separable, custom };

  struct Evaluators {
    std::function<double(double, double, double)> F;
    std::function<double(double, double, double)> G;
    std::function<double(double, double)> f;
  };

  using ValidationBox = ForcingValidationBox;

  static Forcing zero();
  /// F = b v with b(t,x) = tau(t) g(x).
  static Forcing linear(TimeFactor tau, SpatialProfile g);
  /// F = b psi(v) with b(t,x) = tau(t) g(x).
  static Forcing separable(TimeFactor tau, SpatialProfile g, Psi psi);
  /// User-supplied evaluators. G is checked against finite differences of F
  /// and |G| <= f on random samples in `box`; violations throw ForcingError.
  /// The envelope describes t -> ||f(t,.)||^2 and may be left unset, in which
  /// case admissibility checks refuse the forcing.
  static Forcing custom(Evaluators ev, std::optional<GrowthEnvelope> f_norm_envelope,
                        const ValidationBox& box = ValidationBox{});

  Kind kind() const { return kind_; }
  const TimeFactor& time_factor() const { return tau_; }
  const SpatialProfile& spatial_profile() const { return g_; }
  Psi psi() const { return psi_; }

  double F(double t, double x, double v) const;
  double G(double t, double x, double v) const;
  double f(double t, double x) const;

  /// True when F(t,x,0) vanishes identically by construction.
  bool vanishes_at_zero() const;

  /// Declared envelope of t -> ||f(t,.)||^2, if any.
  std::optional<GrowthEnvelope> f_norm_envelope() const;

  /// t -> ||f(t,.)||^2 on `grid`. Throws InputError without an envelope.
  TimeFunction f_norm(const SpaceGrid& grid) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::zero;
  TimeFactor tau_;
  SpatialProfile g_;
  Psi psi_ = Psi::sine_gordon;
  Evaluators ev_;
  std::optional<GrowthEnvelope> envelope_;
};

double eval_F(const Forcing& forcing, double t, double x, double v);
double eval_G(const Forcing& forcing, double t, double x, double v);
double eval_f(const Forcing& forcing, double t, double x);

/// sum_j w_j sum_i m_i F(time_scale t_j, x_i, u(t_j,x_i)) with the weights of
/// the grids of u. Throws ForcingError on a non-finite integrand.
double weighted_forcing_integral(const SpaceTimeField& u, const Forcing& forcing, double time_scale);

/// Phi_eps(u) on the rescaled grid (weight e^{-t}, forcing evaluated at eps t).
double phi_eps(const SpaceTimeField& u, const Forcing& forcing, double eps);

struct CFEstimate {
  double value = 0.0;
  std::vector<double> eps_mesh;
  std::vector<double> per_eps;
  bool exact = false;  // true when F(.,.,0) == 0 by construction
};

/// Estimate of C_F = sup_{eps < eps_F} eps^{-1} int e^{-t/eps} int |F(t,x,0)| dx dt
/// as a maximum over a geometric eps mesh.
CFEstimate estimate_C_F(const Forcing& forcing, const SpaceGrid& grid, double eps_F,
                        std::size_t mesh = 16);

}  // namespace wie
