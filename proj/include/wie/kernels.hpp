#pragma once

#include <functional>
#include <string>

namespace wie {

/// Declared asymptotic growth of a function of time. Sampling on a finite
/// window cannot tell e^{t^2} from a bounded function, so integrability
/// against an exponential kernel is decided from the declaration.
struct GrowthEnvelope {
  enum class Kind { bounded, polynomial, exponential, superexponential };

  Kind kind = Kind::bounded;
  double parameter = 0.0;  // polynomial degree or exponential rate

  static GrowthEnvelope bounded() { return {Kind::bounded, 0.0}; }
  static GrowthEnvelope polynomial(double degree) { return {Kind::polynomial, degree}; }
  static GrowthEnvelope exponential(double rate) { return {Kind::exponential, rate}; }
  static GrowthEnvelope superexponential() { return {Kind::superexponential, 0.0}; }

  /// True when e^{-t/scale} times the envelope is integrable on (0, inf).
  bool integrable_against(double scale) const;

  /// Envelope of the square of a function with this envelope.
  GrowthEnvelope squared() const;

  /// Decay rate left over after multiplying by e^{-t/scale}; 0 if none.
  double residual_decay(double scale) const;

  std::string describe() const;
};

GrowthEnvelope parse_envelope(const std::string& kind, double parameter);

/// A scalar function of time with its declared growth envelope.
struct TimeFunction {
  std::function<double(double)> eval;
  GrowthEnvelope envelope;

  double operator()(double t) const { return eval(t); }
};

/// N_eps(t) = eps^{-2} t e^{-t/eps}.
double kernel_N(double eps, double t);

/// Default quadrature horizon for kernel integrals: s + 50 * (decay length).
double kernel_horizon(double eps, double s, const GrowthEnvelope& envelope);

/// b_eps(s) = int_0^T_quad N_eps(t) b(t+s) dt. A non-positive T_quad selects
/// kernel_horizon(). Throws TailToleranceError when the kernel mass beyond
/// T_quad exceeds tail_tol, AdmissibilityError when the envelope of b is not
/// integrable against the kernel.
double mollify(const TimeFunction& b, double eps, double s, double T_quad = 0.0,
               double tail_tol = 1e-12);

/// Q_eps(s) = int_0^inf N_eps(t) f_norm(t+s) dt, where f_norm(t) = ||f(t,.)||^2.
double q_eps(const TimeFunction& f_norm, double eps, double s);

/// Max of f over a uniform mesh of [a, b] with `mesh` points.
double sampled_sup(const std::function<double(double)>& f, double a, double b,
                   std::size_t mesh = 10000);

struct KernelOptions {
  double T_quad = 0.0;  // <= 0: chosen from the envelope
  std::size_t sup_mesh = 10000;
};

/// K*_F(alpha) = int t^a e^{-t/eF} eF^{-(a+1)} f_norm dt + Gamma(a+1) sup_{[0,a+1]} f_norm.
double k_star(const TimeFunction& f_norm, double eps_F, double alpha, KernelOptions opts = {});

/// M_F(T) = sup_{[0,2T+1]} f_norm + eF^{-2} e^{T/eF} int t e^{-t/eF} f_norm dt.
double m_f(const TimeFunction& f_norm, double eps_F, double T, KernelOptions opts = {});

/// int_0^inf e^{-t/scale} t^alpha g(t) dt by adaptive Gauss-Kronrod on a
/// horizon chosen from the envelope of g.
double laplace_moment(const TimeFunction& g, double scale, double alpha, double T_quad = 0.0);

/// Adaptive Gauss-Kronrod on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

}  // namespace wie
