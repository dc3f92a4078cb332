#include "wie/kernels.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "wie/errors.hpp"

namespace wie {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive");
}

}  // namespace

bool GrowthEnvelope::integrable_against(double scale) const {
  switch (kind) {
    case Kind::bounded:
    case Kind::polynomial:
      return true;
    case Kind::exponential:
      return parameter < 1.0 / scale;
    case Kind::superexponential:
      return false;
  }
  return false;
}

GrowthEnvelope GrowthEnvelope::squared() const {
  switch (kind) {
    case Kind::polynomial:
      return polynomial(2.0 * parameter);
    case Kind::exponential:
      return exponential(2.0 * parameter);
    default:
      return *this;
  }
}

double GrowthEnvelope::residual_decay(double scale) const {
  if (!integrable_against(scale)) return 0.0;
  if (kind == Kind::exponential) return 1.0 / scale - std::max(parameter, 0.0);
  return 1.0 / scale;
}

std::string GrowthEnvelope::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::bounded:
      return "bounded";
    case Kind::polynomial:
      os << "polynomial(" << parameter << ")";
      return os.str();
    case Kind::exponential:
      os << "exponential(" << parameter << ")";
      return os.str();
    case Kind::superexponential:
      return "superexponential";
  }
  return "unknown";
}

GrowthEnvelope parse_envelope(const std::string& kind, double parameter) {
  if (kind == "bounded") return GrowthEnvelope::bounded();
  if (kind == "polynomial") return GrowthEnvelope::polynomial(parameter);
  if (kind == "exponential") return GrowthEnvelope::exponential(parameter);
  if (kind == "superexponential") return GrowthEnvelope::superexponential();
  throw ConfigError("unknown growth envelope '" + kind + "'");
}

double kernel_N(double eps, double t) {
  require_positive(eps, "kernel_N: eps");
  if (t < 0.0) throw ParameterError("kernel_N: t must be non-negative");
  return t * std::exp(-t / eps) / (eps * eps);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  // boost's termination test misbehaves on very short intervals, so always work on [0, 1]
  const double len = b - a;
  const auto g = [&](double y) { return f(a + len * y); };
  return len * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 18, rel_tol, &err);
}

namespace {

// Splits [0, T] at multiples of the decay length so the adaptive rule sees
// the peak region at its own resolution.
double integrate_decaying(const std::function<double(double)>& f, double decay_length, double T) {
  double total = 0.0;
  double a = 0.0;
  for (double m : {1.0, 4.0, 12.0, 30.0}) {
    const double b = std::min(T, m * decay_length);
    if (b > a) total += integrate(f, a, b);
    a = std::max(a, b);
  }
  if (T > a) total += integrate(f, a, T);
  return total;
}

}  // namespace

double kernel_horizon(double eps, double s, const GrowthEnvelope& envelope) {
  const double decay = envelope.residual_decay(eps);
  const double base = decay > 0.0 ? 1.0 / decay : eps;
  double factor = 50.0;
  if (envelope.kind == GrowthEnvelope::Kind::polynomial) factor += 3.0 * envelope.parameter;
  return std::max(50.0 * eps, s + factor * base);
}

double mollify(const TimeFunction& b, double eps, double s, double T_quad, double tail_tol) {
  require_positive(eps, "mollify: eps");
  if (s < 0.0) throw ParameterError("mollify: s must be non-negative");
  if (!b.envelope.integrable_against(eps))
    throw AdmissibilityError("mollify: growth envelope " + b.envelope.describe() +
                             " is not integrable against the kernel");
  const double T = T_quad > 0.0 ? T_quad : kernel_horizon(eps, s, b.envelope);
  const double x = T / eps;
  if ((1.0 + x) * std::exp(-x) > tail_tol)
    throw TailToleranceError("mollify: kernel mass beyond the quadrature horizon exceeds tail_tol");
  const auto integrand = [&](double t) { return t * std::exp(-t / eps) / (eps * eps) * b(t + s); };
  const double v = integrate_decaying(integrand, eps, T);
  if (!std::isfinite(v)) throw AdmissibilityError("mollify: non-finite quadrature");
  return v;
}

double q_eps(const TimeFunction& f_norm, double eps, double s) {
  return mollify(f_norm, eps, s);
}

double sampled_sup(const std::function<double(double)>& f, double a, double b, std::size_t mesh) {
  if (mesh < 2) mesh = 2;
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mesh; ++k) {
    const double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(mesh - 1);
    m = std::max(m, f(t));
  }
  return m;
}

double laplace_moment(const TimeFunction& g, double scale, double alpha, double T_quad) {
  require_positive(scale, "laplace_moment: scale");
  if (alpha < 0.0) throw ParameterError("laplace_moment: alpha must be non-negative");
  if (!g.envelope.integrable_against(scale))
    throw AdmissibilityError("growth envelope " + g.envelope.describe() +
                             " is not integrable against e^{-t/" + std::to_string(scale) + "}");
  const double decay = g.envelope.residual_decay(scale);
  double deg = g.envelope.kind == GrowthEnvelope::Kind::polynomial ? g.envelope.parameter : 0.0;
  const double T = T_quad > 0.0 ? T_quad : (60.0 + 3.0 * (alpha + deg)) / decay;
  const auto integrand = [&](double t) {
    const double p = alpha == 0.0 ? 1.0 : std::pow(t, alpha);
    return p * std::exp(-t / scale) * g(t);
  };
  return integrate_decaying(integrand, std::max(1.0, alpha) / decay, T);
}

double k_star(const TimeFunction& f_norm, double eps_F, double alpha, KernelOptions opts) {
  if (!(eps_F > 0.0 && eps_F < 0.5)) throw ParameterError("k_star: eps_F must lie in (0, 1/2)");
  if (alpha < 0.0) throw ParameterError("k_star: alpha must be non-negative");
  const double integral = laplace_moment(f_norm, eps_F, alpha, opts.T_quad) / std::pow(eps_F, alpha + 1.0);
  const double sup = sampled_sup(f_norm.eval, 0.0, alpha + 1.0, opts.sup_mesh);
  const double v = integral + std::tgamma(alpha + 1.0) * sup;
  if (!std::isfinite(v)) throw AdmissibilityError("k_star: non-finite value");
  return v;
}

double m_f(const TimeFunction& f_norm, double eps_F, double T, KernelOptions opts) {
  require_positive(eps_F, "m_f: eps_F");
  require_positive(T, "m_f: T");
  const double sup = sampled_sup(f_norm.eval, 0.0, 2.0 * T + 1.0, opts.sup_mesh);
  const double moment = laplace_moment(f_norm, eps_F, 1.0, opts.T_quad);
  const double v = sup + std::exp(T / eps_F) * moment / (eps_F * eps_F);
  if (!std::isfinite(v)) throw AdmissibilityError("m_f: non-finite value");
  return v;
}

}  // namespace wie
