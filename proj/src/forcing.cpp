#include "wie/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wie/errors.hpp"

namespace wie {

// ---------------------------------------------------------------------------
// TimeFactor

TimeFactor TimeFactor::constant(double value) {
  TimeFactor f;
  f.kind_ = Kind::constant;
  f.amplitude_ = value;
  return f;
}

TimeFactor TimeFactor::exp_decay(double amplitude, double rate) {
  if (rate < 0.0) throw ParameterError("exp_decay: rate must be non-negative");
  TimeFactor f;
  f.kind_ = Kind::exp_decay;
  f.amplitude_ = amplitude;
  f.rate_ = rate;
  return f;
}

TimeFactor TimeFactor::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ParameterError("polynomial time factor: need coefficients");
  TimeFactor f;
  f.kind_ = Kind::polynomial;
  f.coeffs_ = std::move(coeffs);
  return f;
}

TimeFactor TimeFactor::exp_growth(double amplitude, double rate) {
  if (rate < 0.0) throw ParameterError("exp_growth: rate must be non-negative");
  TimeFactor f;
  f.kind_ = Kind::exp_growth;
  f.amplitude_ = amplitude;
  f.rate_ = rate;
  return f;
}

TimeFactor TimeFactor::exp_square(double amplitude) {
  TimeFactor f;
  f.kind_ = Kind::exp_square;
  f.amplitude_ = amplitude;
  return f;
}

TimeFactor TimeFactor::tabulated(std::vector<double> ts, std::vector<double> vs) {
  if (ts.size() != vs.size() || ts.size() < 2)
    throw ShapeError("tabulated time factor: need matching tables with >= 2 entries");
  if (!std::is_sorted(ts.begin(), ts.end()))
    throw InputError("tabulated time factor: times must be increasing");
  TimeFactor f;
  f.kind_ = Kind::tabulated;
  f.ts_ = std::move(ts);
  f.vs_ = std::move(vs);
  return f;
}

double TimeFactor::operator()(double t) const {
  switch (kind_) {
    case Kind::constant:
      return amplitude_;
    case Kind::exp_decay:
      return amplitude_ * std::exp(-rate_ * t);
    case Kind::polynomial: {
      double v = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * t + *it;
      return v;
    }
    case Kind::exp_growth:
      return amplitude_ * std::exp(rate_ * t);
    case Kind::exp_square:
      return amplitude_ * std::exp(t * t);
    case Kind::tabulated: {
      if (t <= ts_.front()) return vs_.front();
      if (t >= ts_.back()) return vs_.back();
      const auto k = static_cast<std::size_t>(std::upper_bound(ts_.begin(), ts_.end(), t) - ts_.begin());
      const double a = (t - ts_[k - 1]) / (ts_[k] - ts_[k - 1]);
      return (1.0 - a) * vs_[k - 1] + a * vs_[k];
    }
  }
  return 0.0;
}

GrowthEnvelope TimeFactor::envelope() const {
  switch (kind_) {
    case Kind::constant:
    case Kind::exp_decay:
    case Kind::tabulated:
      return GrowthEnvelope::bounded();
    case Kind::polynomial:
      return GrowthEnvelope::polynomial(static_cast<double>(coeffs_.size() - 1));
    case Kind::exp_growth:
      return GrowthEnvelope::exponential(rate_);
    case Kind::exp_square:
      return GrowthEnvelope::superexponential();
  }
  return GrowthEnvelope::superexponential();
}

std::string TimeFactor::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "constant(" << amplitude_ << ")";
      break;
    case Kind::exp_decay:
      os << amplitude_ << "*exp(-" << rate_ << "t)";
      break;
    case Kind::polynomial:
      os << "polynomial(degree " << coeffs_.size() - 1 << ")";
      break;
    case Kind::exp_growth:
      os << amplitude_ << "*exp(" << rate_ << "t)";
      break;
    case Kind::exp_square:
      os << amplitude_ << "*exp(t^2)";
      break;
    case Kind::tabulated:
      os << "tabulated(" << ts_.size() << " samples)";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// psi

Psi parse_psi(const std::string& name) {
  if (name == "sine_gordon") return Psi::sine_gordon;
  if (name == "sine") return Psi::sine;
  if (name == "tanh") return Psi::tanh;
  throw ConfigError("unknown psi '" + name + "' (expected sine_gordon|sine|tanh)");
}

std::string to_string(Psi psi) {
  switch (psi) {
    case Psi::sine_gordon:
      return "sine_gordon";
    case Psi::sine:
      return "sine";
    case Psi::tanh:
      return "tanh";
  }
  return "unknown";
}

double psi_value(Psi psi, double v) {
  switch (psi) {
    case Psi::sine_gordon:
      return std::cos(v) - 1.0;
    case Psi::sine:
      return std::sin(v);
    case Psi::tanh:
      return std::tanh(v);
  }
  return 0.0;
}

double psi_derivative(Psi psi, double v) {
  switch (psi) {
    case Psi::sine_gordon:
      return -std::sin(v);
    case Psi::sine:
      return std::cos(v);
    case Psi::tanh: {
      const double c = std::cosh(v);
      return 1.0 / (c * c);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Forcing

Forcing Forcing::zero() { return {}; }

Forcing Forcing::linear(TimeFactor tau, SpatialProfile g) {
  Forcing f;
  f.kind_ = Kind::linear;
  f.tau_ = std::move(tau);
  f.g_ = std::move(g);
  f.envelope_ = f.tau_.envelope().squared();
  return f;
}

Forcing Forcing::separable(TimeFactor tau, SpatialProfile g, Psi psi) {
  Forcing f = linear(std::move(tau), std::move(g));
  f.kind_ = Kind::separable;
  f.psi_ = psi;
  return f;
}

Forcing Forcing::custom(Evaluators ev, std::optional<GrowthEnvelope> f_norm_envelope,
                        const ValidationBox& box) {
  if (!ev.F || !ev.G || !ev.f) throw InputError("custom forcing: F, G and f must all be supplied");
  Forcing out;
  out.kind_ = Kind::custom;
  out.ev_ = std::move(ev);
  out.envelope_ = f_norm_envelope;

  std::mt19937_64 rng(box.seed);
  std::uniform_real_distribution<double> ut(0.0, box.t_max);
  std::uniform_real_distribution<double> ux(box.x_min, box.x_max);
  std::uniform_real_distribution<double> uv(-box.v_max, box.v_max);
  for (std::size_t k = 0; k < box.samples; ++k) {
    const double t = ut(rng);
    const double x = ux(rng);
    const double v = uv(rng);
    const double h = 1e-4 * std::max(1.0, std::abs(v));
    const double Fp = out.F(t, x, v + h);
    const double Fm = out.F(t, x, v - h);
    const double G = out.G(t, x, v);
    const double fb = out.f(t, x);
    const double fd = (Fp - Fm) / (2.0 * h);
    const double scale = 1.0 + std::abs(G) + std::abs(Fp) + std::abs(Fm);
    if (std::abs(fd - G) > 1e-5 * scale) {
      std::ostringstream os;
      os << "custom forcing: G disagrees with dF/dv at (t,x,v)=(" << t << "," << x << "," << v
         << "): finite difference " << fd << ", G " << G;
      throw ForcingError(os.str());
    }
    if (std::abs(G) > fb * (1.0 + 1e-12) + 1e-14) {
      std::ostringstream os;
      os << "custom forcing: |G| exceeds f at (t,x,v)=(" << t << "," << x << "," << v << ")";
      throw ForcingError(os.str());
    }
  }
  return out;
}

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw ForcingError(std::string("forcing: non-finite ") + what);
  return v;
}

}  // namespace

double Forcing::F(double t, double x, double v) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
      return tau_(t) * g_(x) * v;
    case Kind::separable:
      return tau_(t) * g_(x) * psi_value(psi_, v);
    case Kind::custom:
      return checked(ev_.F(t, x, v), "F");
  }
  return 0.0;
}

double Forcing::G(double t, double x, double v) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
      return tau_(t) * g_(x);
    case Kind::separable:
      return tau_(t) * g_(x) * psi_derivative(psi_, v);
    case Kind::custom:
      return checked(ev_.G(t, x, v), "G");
  }
  return 0.0;
}

double Forcing::f(double t, double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear:
    case Kind::separable:
      return std::abs(tau_(t) * g_(x));
    case Kind::custom:
      return checked(ev_.f(t, x), "f");
  }
  return 0.0;
}

bool Forcing::vanishes_at_zero() const { return kind_ != Kind::custom; }

std::optional<GrowthEnvelope> Forcing::f_norm_envelope() const {
  if (kind_ == Kind::zero) return GrowthEnvelope::bounded();
  return envelope_;
}

TimeFunction Forcing::f_norm(const SpaceGrid& grid) const {
  const auto env = f_norm_envelope();
  if (!env) throw InputError("forcing: no growth envelope declared for ||f(t,.)||^2");
  if (kind_ == Kind::zero) return {[](double) { return 0.0; }, *env};
  if (kind_ == Kind::linear || kind_ == Kind::separable) {
    const auto g = g_.sample(grid);
    const double g2 = l2_norm_squared(g, grid);
    return {[tau = tau_, g2](double t) {
              const double a = tau(t);
              return a * a * g2;
            },
            *env};
  }
  const auto xs = grid.nodes();
  const std::vector<double> m(grid.weights().begin(), grid.weights().end());
  return {[ev = ev_, xs, m](double t) {
            double s = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
              const double v = ev.f(t, xs[i]);
              s += m[i] * v * v;
            }
            return s;
          },
          *env};
}

std::string Forcing::describe() const {
  switch (kind_) {
    case Kind::zero:
      return "zero";
    case Kind::linear:
      return "linear, tau = " + tau_.describe();
    case Kind::separable:
      return "separable, tau = " + tau_.describe() + ", psi = " + to_string(psi_);
    case Kind::custom:
      return "custom";
  }
  return "unknown";
}

double eval_F(const Forcing& forcing, double t, double x, double v) { return forcing.F(t, x, v); }
double eval_G(const Forcing& forcing, double t, double x, double v) { return forcing.G(t, x, v); }
double eval_f(const Forcing& forcing, double t, double x) { return forcing.f(t, x); }

double weighted_forcing_integral(const SpaceTimeField& u, const Forcing& forcing, double time_scale) {
  if (forcing.kind() == Forcing::Kind::zero) return 0.0;
  const auto& tg = u.time_grid();
  const auto& sg = u.space_grid();
  const auto wt = tg.weights();
  const auto m = sg.weights();
  double total = 0.0;
  for (std::size_t j = 0; j < u.nt(); ++j) {
    const double t = time_scale * tg.t(j);
    const auto row = u.layer(j);
    double s = 0.0;
    for (std::size_t i = 0; i < u.nx(); ++i) s += m[i] * forcing.F(t, sg.x(i), row[i]);
    total += wt[j] * s;
  }
  if (!std::isfinite(total)) throw ForcingError("forcing integral is not finite");
  return total;
}

double phi_eps(const SpaceTimeField& u, const Forcing& forcing, double eps) {
  if (!(eps > 0.0)) throw ParameterError("phi_eps: eps must be positive");
  return weighted_forcing_integral(u, forcing, eps);
}

CFEstimate estimate_C_F(const Forcing& forcing, const SpaceGrid& grid, double eps_F, std::size_t mesh) {
  if (!(eps_F > 0.0 && eps_F < 0.5)) throw ParameterError("C_F: eps_F must lie in (0, 1/2)");
  CFEstimate out;
  mesh = std::max<std::size_t>(mesh, 2);
  for (std::size_t k = 0; k < mesh; ++k) {
    // geometric mesh from eps_F/1000 up to 0.99 eps_F
    const double a = static_cast<double>(k) / static_cast<double>(mesh - 1);
    out.eps_mesh.push_back(eps_F * std::pow(10.0, -3.0 * (1.0 - a)) * (a == 1.0 ? 0.99 : 1.0));
  }
  if (forcing.vanishes_at_zero()) {
    out.exact = true;
    out.per_eps.assign(mesh, 0.0);
    return out;
  }
  const auto env = forcing.f_norm_envelope().value_or(GrowthEnvelope::bounded());
  const auto xs = grid.nodes();
  const auto m = grid.weights();
  const TimeFunction l1{[&](double t) {
                          double s = 0.0;
                          for (std::size_t i = 0; i < xs.size(); ++i)
                            s += m[i] * std::abs(forcing.F(t, xs[i], 0.0));
                          return s;
                        },
                        GrowthEnvelope{env.kind, 0.5 * env.parameter}};
  for (double eps : out.eps_mesh) {
    const double v = laplace_moment(l1, eps, 0.0) / eps;
    if (!std::isfinite(v)) throw AdmissibilityError("C_F: non-finite quadrature");
    out.per_eps.push_back(v);
    out.value = std::max(out.value, v);
  }
  return out;
}

}  // namespace wie
