#include "wie/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wie/errors.hpp"

namespace wie {

Boundary parse_boundary(const std::string& name) {
  if (name == "dirichlet") return Boundary::dirichlet;
  if (name == "periodic") return Boundary::periodic;
  throw ConfigError("unknown boundary '" + name + "' (expected dirichlet|periodic)");
}

std::string to_string(Boundary b) { return b == Boundary::dirichlet ? "dirichlet" : "periodic"; }

// ---------------------------------------------------------------------------
// SpaceGrid

SpaceGrid SpaceGrid::make(double half_length, std::size_t n_points, Boundary boundary) {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ParameterError("space grid: half_length must be positive");
  if (n_points < 3) throw ParameterError("space grid: need at least 3 points");
  SpaceGrid g;
  g.half_length_ = half_length;
  g.n_points_ = n_points;
  g.boundary_ = boundary;
  const double n = static_cast<double>(n_points);
  g.spacing_ = boundary == Boundary::dirichlet ? 2.0 * half_length / (n - 1.0) : 2.0 * half_length / n;
  g.weights_ = boundary == Boundary::dirichlet ? trapezoid_weights(n_points, g.spacing_)
                                               : std::vector<double>(n_points, g.spacing_);
  return g;
}

std::vector<double> SpaceGrid::nodes() const {
  std::vector<double> xs(n_points_);
  for (std::size_t i = 0; i < n_points_; ++i) xs[i] = x(i);
  return xs;
}

// ---------------------------------------------------------------------------
// Quadrature weights

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  if (n > 0) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

std::vector<double> exp_trapezoid_weights(std::size_t n, double h, double scale) {
  if (n < 2) throw ParameterError("exp_trapezoid_weights: need at least 2 nodes");
  const double hs = h / scale;
  const double em = std::expm1(-hs);  // e^{-hs} - 1
  const double left = (hs + em) / hs;
  const double right = (-em - hs * std::exp(-hs)) / hs;

  std::vector<double> w(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double c = std::exp(-static_cast<double>(k) * hs);
    w[k] += c * left;
    w[k + 1] += c * right;
  }

  if (n >= 3) {
    // Q_lin - I = (hs^2/12) * ( e^{-S}(g'(S) + g(S)) - g'(0) - g(0) - I ) + O(hs^4)
    const double c = hs * hs / 12.0;
    const double tail = std::exp(-static_cast<double>(n - 1) * hs);
    w[0] += c * (1.0 - 1.5 / hs);
    w[1] += c * (2.0 / hs);
    w[2] += c * (-0.5 / hs);
    w[n - 1] -= c * tail * (1.0 + 1.5 / hs);
    w[n - 2] -= c * tail * (-2.0 / hs);
    w[n - 3] -= c * tail * (0.5 / hs);
    for (double& v : w) v /= (1.0 + c);
  }
  for (double& v : w) v *= scale;
  return w;
}

// ---------------------------------------------------------------------------
// TimeGrid

TimeGrid TimeGrid::weighted(double horizon, std::size_t n_steps, double decay_scale, double tail_tol,
                            double quad_tol) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ParameterError("time grid: horizon must be positive");
  if (n_steps < 3) throw ParameterError("time grid: need at least 3 nodes");
  if (!(decay_scale > 0.0)) throw ParameterError("time grid: decay scale must be positive");
  TimeGrid g;
  g.horizon_ = horizon;
  g.n_steps_ = n_steps;
  g.spacing_ = horizon / static_cast<double>(n_steps - 1);
  g.decay_scale_ = decay_scale;
  g.tail_tol_ = tail_tol;
  if (g.spacing_ > decay_scale)
    throw ParameterError("time grid: spacing must not exceed the decay scale");
  if (std::exp(-horizon / decay_scale) > tail_tol)
    throw ParameterError("time grid: horizon too short, e^{-T} exceeds tail_tol");
  g.weights_ = exp_trapezoid_weights(n_steps, g.spacing_, decay_scale);
  const double mass = std::accumulate(g.weights_.begin(), g.weights_.end(), 0.0) / decay_scale;
  if (mass < 1.0 - 2.0 * tail_tol || mass > 1.0 + quad_tol)
    throw ParameterError("time grid: weight quadrature outside tolerance");
  return g;
}

TimeGrid TimeGrid::weighted_with_spacing(double horizon, double spacing, double decay_scale,
                                         double tail_tol) {
  if (!(spacing > 0.0)) throw ParameterError("time grid: spacing must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(horizon / spacing - 1e-9)) + 1;
  return weighted(static_cast<double>(n - 1) * spacing, n, decay_scale, tail_tol);
}

TimeGrid TimeGrid::plain(double horizon, std::size_t n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ParameterError("time grid: horizon must be positive");
  if (n_steps < 3) throw ParameterError("time grid: need at least 3 nodes");
  TimeGrid g;
  g.horizon_ = horizon;
  g.n_steps_ = n_steps;
  g.spacing_ = horizon / static_cast<double>(n_steps - 1);
  g.decay_scale_ = 0.0;
  g.weights_ = trapezoid_weights(n_steps, g.spacing_);
  return g;
}

// ---------------------------------------------------------------------------
// SpaceTimeField

SpaceTimeField::SpaceTimeField(TimeGrid time, SpaceGrid space, double fill)
    : time_(std::move(time)), space_(std::move(space)), values_(time_.size() * space_.size(), fill) {}

bool SpaceTimeField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// SpatialProfile

SpatialProfile SpatialProfile::zero() { return {}; }

SpatialProfile SpatialProfile::constant(double value) {
  SpatialProfile p;
  p.kind_ = Kind::constant;
  p.amplitude_ = value;
  return p;
}

SpatialProfile SpatialProfile::bump(double amplitude, double radius, double center) {
  if (!(radius > 0.0)) throw ParameterError("bump: radius must be positive");
  SpatialProfile p;
  p.kind_ = Kind::bump;
  p.amplitude_ = amplitude;
  p.width_ = radius;
  p.center_ = center;
  return p;
}

SpatialProfile SpatialProfile::gaussian(double amplitude, double width, double center) {
  if (!(width > 0.0)) throw ParameterError("gaussian: width must be positive");
  SpatialProfile p;
  p.kind_ = Kind::gaussian;
  p.amplitude_ = amplitude;
  p.width_ = width;
  p.center_ = center;
  return p;
}

SpatialProfile SpatialProfile::sine(double amplitude, double wavenumber) {
  SpatialProfile p;
  p.kind_ = Kind::sine;
  p.amplitude_ = amplitude;
  p.width_ = wavenumber;
  return p;
}

SpatialProfile SpatialProfile::bump_derivative(double amplitude, double radius, double center,
                                               double scale) {
  SpatialProfile p = bump(amplitude, radius, center);
  p.kind_ = Kind::bump_derivative;
  p.scale_ = scale;
  return p;
}

SpatialProfile SpatialProfile::tabulated(std::vector<double> xs, std::vector<double> vs) {
  if (xs.size() != vs.size() || xs.size() < 2)
    throw ShapeError("tabulated profile: need matching tables with >= 2 entries");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw InputError("tabulated profile: abscissae must be increasing");
  SpatialProfile p;
  p.kind_ = Kind::tabulated;
  p.xs_ = std::move(xs);
  p.vs_ = std::move(vs);
  return p;
}

double SpatialProfile::operator()(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return amplitude_;
    case Kind::bump:
    case Kind::bump_derivative: {
      const double y = (x - center_) / width_;
      if (std::abs(y) >= 1.0) return 0.0;
      const double q = 1.0 - y * y;
      const double b = amplitude_ * std::exp(1.0 - 1.0 / q);
      if (kind_ == Kind::bump) return b;
      return scale_ * b * (-2.0 * y / (q * q)) / width_;
    }
    case Kind::gaussian: {
      const double y = (x - center_) / width_;
      return amplitude_ * std::exp(-0.5 * y * y);
    }
    case Kind::sine:
      return amplitude_ * std::sin(width_ * x);
    case Kind::tabulated: {
      if (x < xs_.front() || x > xs_.back()) return 0.0;
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - xs_.begin()), xs_.size() - 1);
      const std::size_t k0 = k - 1;
      const double a = (x - xs_[k0]) / (xs_[k] - xs_[k0]);
      return (1.0 - a) * vs_[k0] + a * vs_[k];
    }
  }
  return 0.0;
}

double SpatialProfile::support_radius() const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::bump:
    case Kind::bump_derivative:
      return width_;
    case Kind::tabulated:
      return std::max(std::abs(xs_.front()), std::abs(xs_.back()));
    default:
      return std::numeric_limits<double>::infinity();
  }
}

std::vector<double> SpatialProfile::sample(const SpaceGrid& grid) const {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = (*this)(grid.x(i));
  return v;
}

// ---------------------------------------------------------------------------
// InitialData

InitialData InitialData::zero(const SpaceGrid& grid) {
  return {std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
}

InitialData InitialData::from_profiles(const SpatialProfile& w0, const SpatialProfile& w1,
                                       const SpaceGrid& grid) {
  return {w0.sample(grid), w1.sample(grid)};
}

void InitialData::validate(const SpaceGrid& grid, double margin, double support_tol) const {
  if (w0.size() != grid.size() || w1.size() != grid.size())
    throw ShapeError("initial data: length does not match the space grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(w0[i]) || !std::isfinite(w1[i]))
      throw InputError("initial data: non-finite entry");
  }
  if (grid.boundary() != Boundary::dirichlet) return;
  const double inner = grid.half_length() - margin;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.x(i)) <= inner) continue;
    if (std::abs(w0[i]) > support_tol || std::abs(w1[i]) > support_tol)
      throw InputError("initial data: support reaches within the propagation margin of the boundary");
  }
}

// ---------------------------------------------------------------------------
// Quadrature

double trapezoid_space(std::span<const double> values, const SpaceGrid& grid) {
  if (values.size() != grid.size()) throw ShapeError("trapezoid_space: length mismatch");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
  return s;
}

double weighted_time_integral(std::span<const double> series, const TimeGrid& grid) {
  if (series.size() != grid.size()) throw ShapeError("weighted_time_integral: length mismatch");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t j = 0; j < series.size(); ++j) s += w[j] * series[j];
  return s;
}

double l2_norm_squared(std::span<const double> v, const SpaceGrid& grid) {
  if (v.size() != grid.size()) throw ShapeError("l2_norm_squared: length mismatch");
  const auto w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * v[i] * v[i];
  return s;
}

// ---------------------------------------------------------------------------
// Derivatives

FieldDerivatives discrete_derivatives(const SpaceTimeField& u) {
  const std::size_t nt = u.nt();
  const std::size_t nx = u.nx();
  if (nt < 3 || nx < 3) throw ShapeError("discrete_derivatives: need at least 3 nodes per axis");
  const double ht = u.time_grid().spacing();
  const double hx = u.space_grid().spacing();

  FieldDerivatives d{SpaceTimeField(u.time_grid(), u.space_grid()),
                     SpaceTimeField(u.time_grid(), u.space_grid()),
                     SpaceTimeField(u.time_grid(), u.space_grid())};

  for (std::size_t i = 0; i < nx; ++i) {
    d.u_t(0, i) = (-3.0 * u(0, i) + 4.0 * u(1, i) - u(2, i)) / (2.0 * ht);
    d.u_t(nt - 1, i) = (3.0 * u(nt - 1, i) - 4.0 * u(nt - 2, i) + u(nt - 3, i)) / (2.0 * ht);
    for (std::size_t j = 1; j + 1 < nt; ++j) {
      d.u_t(j, i) = (u(j + 1, i) - u(j - 1, i)) / (2.0 * ht);
      d.u_tt(j, i) = (u(j + 1, i) - 2.0 * u(j, i) + u(j - 1, i)) / (ht * ht);
    }
    if (nt >= 4) {
      d.u_tt(0, i) = (2.0 * u(0, i) - 5.0 * u(1, i) + 4.0 * u(2, i) - u(3, i)) / (ht * ht);
      d.u_tt(nt - 1, i) =
          (2.0 * u(nt - 1, i) - 5.0 * u(nt - 2, i) + 4.0 * u(nt - 3, i) - u(nt - 4, i)) / (ht * ht);
    } else {
      d.u_tt(0, i) = d.u_tt(1, i);
      d.u_tt(nt - 1, i) = d.u_tt(1, i);
    }
  }

  const bool periodic = u.space_grid().boundary() == Boundary::periodic;
  for (std::size_t j = 0; j < nt; ++j) {
    const auto v = u.layer(j);
    auto out = d.u_x.layer(j);
    for (std::size_t i = 1; i + 1 < nx; ++i) out[i] = (v[i + 1] - v[i - 1]) / (2.0 * hx);
    if (periodic) {
      out[0] = (v[1] - v[nx - 1]) / (2.0 * hx);
      out[nx - 1] = (v[0] - v[nx - 2]) / (2.0 * hx);
    } else {
      out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * hx);
      out[nx - 1] = (3.0 * v[nx - 1] - 4.0 * v[nx - 2] + v[nx - 3]) / (2.0 * hx);
    }
  }
  return d;
}

}  // namespace wie
