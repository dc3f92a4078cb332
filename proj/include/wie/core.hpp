#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wie {

enum class Boundary { dirichlet, periodic };

Boundary parse_boundary(const std::string& name);
std::string to_string(Boundary b);

/// Uniform grid on [-L, L]. Dirichlet grids include both end points; periodic
/// grids identify -L with L and store Nx distinct nodes.
class SpaceGrid {
 public:
  static constexpr int dimension = 1;

  static SpaceGrid make(double half_length, std::size_t n_points, Boundary boundary);

  double half_length() const { return half_length_; }
  std::size_t size() const { return n_points_; }
  double spacing() const { return spacing_; }
  Boundary boundary() const { return boundary_; }

  double x(std::size_t i) const { return -half_length_ + static_cast<double>(i) * spacing_; }
  std::vector<double> nodes() const;

  /// Trapezoid weights (dirichlet) or rectangle weights (periodic).
  std::span<const double> weights() const { return weights_; }

  /// Dirichlet end nodes are held at the boundary value.
  bool is_fixed(std::size_t i) const {
    return boundary_ == Boundary::dirichlet && (i == 0 || i + 1 == n_points_);
  }

 private:
  SpaceGrid() = default;
  double half_length_ = 0.0;
  std::size_t n_points_ = 0;
  double spacing_ = 0.0;
  Boundary boundary_ = Boundary::dirichlet;
  std::vector<double> weights_;
};

/// Product-integration weights for the integral of e^{-t/scale} g(t) over
/// [0, (n-1)h] from the nodal values of g. The rule integrates the piecewise
/// linear interpolant of g exactly against the exponential and adds an
/// Euler-Maclaurin end correction, so it is exact for affine g and O(h^4)
/// for smooth g. Requires n >= 2.
std::vector<double> exp_trapezoid_weights(std::size_t n, double h, double scale = 1.0);

/// Plain trapezoid weights for n nodes of spacing h.
std::vector<double> trapezoid_weights(std::size_t n, double h);

/// Uniform time grid on [0, horizon]. A weighted grid carries the quadrature
/// weights of e^{-t/decay_scale}; a plain grid carries trapezoid weights.
class TimeGrid {
 public:
  static constexpr double default_tail_tol = 1e-9;
  static constexpr double default_quad_tol = 1e-2;

  /// Grid for the rescaled functional (decay_scale = 1) or for the original
  /// one in physical time (decay_scale = eps). Throws ParameterError if the
  /// truncated tail e^{-horizon/decay_scale} exceeds tail_tol.
  static TimeGrid weighted(double horizon, std::size_t n_steps, double decay_scale = 1.0,
                           double tail_tol = default_tail_tol,
                           double quad_tol = default_quad_tol);

  /// Grid with horizon chosen as (n_steps-1)*spacing closest to the request.
  static TimeGrid weighted_with_spacing(double horizon, double spacing, double decay_scale = 1.0,
                                        double tail_tol = default_tail_tol);

  static TimeGrid plain(double horizon, std::size_t n_steps);

  double horizon() const { return horizon_; }
  std::size_t size() const { return n_steps_; }
  double spacing() const { return spacing_; }
  double decay_scale() const { return decay_scale_; }
  bool is_weighted() const { return decay_scale_ > 0.0; }
  double tail_tol() const { return tail_tol_; }

  double t(std::size_t j) const { return static_cast<double>(j) * spacing_; }
  std::span<const double> weights() const { return weights_; }

 private:
  TimeGrid() = default;
  double horizon_ = 0.0;
  std::size_t n_steps_ = 0;
  double spacing_ = 0.0;
  double decay_scale_ = 0.0;
  double tail_tol_ = default_tail_tol;
  std::vector<double> weights_;
};

/// Row-major samples u(t_j, x_i), j < Nt, i < Nx.
class SpaceTimeField {
 public:
  SpaceTimeField(TimeGrid time, SpaceGrid space, double fill = 0.0);

  std::size_t nt() const { return time_.size(); }
  std::size_t nx() const { return space_.size(); }
  const TimeGrid& time_grid() const { return time_; }
  const SpaceGrid& space_grid() const { return space_; }

  double& operator()(std::size_t j, std::size_t i) { return values_[j * nx() + i]; }
  double operator()(std::size_t j, std::size_t i) const { return values_[j * nx() + i]; }

  std::span<double> layer(std::size_t j) { return {values_.data() + j * nx(), nx()}; }
  std::span<const double> layer(std::size_t j) const { return {values_.data() + j * nx(), nx()}; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;

 private:
  TimeGrid time_;
  SpaceGrid space_;
  std::vector<double> values_;
};

/// Closed-form spatial profiles used for initial data and forcing factors.
class SpatialProfile {
 public:
  enum class Kind { zero, constant, bump, gaussian, sine, bump_derivative, tabulated };

  static SpatialProfile zero();
  static SpatialProfile constant(double value);
  /// amplitude * exp(1 - 1/(1 - ((x-center)/radius)^2)) inside the support, 0 outside.
  static SpatialProfile bump(double amplitude, double radius, double center = 0.0);
  static SpatialProfile gaussian(double amplitude, double width, double center = 0.0);
  /// amplitude * sin(wavenumber * x)
  static SpatialProfile sine(double amplitude, double wavenumber);
  /// x-derivative of bump(amplitude, radius, center), scaled by `scale`.
  static SpatialProfile bump_derivative(double amplitude, double radius, double center, double scale);
  /// Piecewise-linear interpolation of (xs, vs); zero outside the table.
  static SpatialProfile tabulated(std::vector<double> xs, std::vector<double> vs);

  double operator()(double x) const;
  Kind kind() const { return kind_; }

  /// Half-width of the support around `center`, or infinity.
  double support_radius() const;
  double center() const { return center_; }

  std::vector<double> sample(const SpaceGrid& grid) const;

 private:
  Kind kind_ = Kind::zero;
  double amplitude_ = 0.0;
  double width_ = 1.0;
  double center_ = 0.0;
  double scale_ = 1.0;
  std::vector<double> xs_, vs_;
};

struct InitialData {
  std::vector<double> w0;
  std::vector<double> w1;

  static InitialData zero(const SpaceGrid& grid);
  static InitialData from_profiles(const SpatialProfile& w0, const SpatialProfile& w1,
                                   const SpaceGrid& grid);

  /// Checks shape and finiteness, and for dirichlet grids that both data
  /// vanish (below `support_tol`) within `margin` of the boundary.
  void validate(const SpaceGrid& grid, double margin, double support_tol = 1e-12) const;
};

double trapezoid_space(std::span<const double> values, const SpaceGrid& grid);
double weighted_time_integral(std::span<const double> series, const TimeGrid& grid);

struct FieldDerivatives {
  SpaceTimeField u_t;
  SpaceTimeField u_tt;
  SpaceTimeField u_x;
};

/// Central differences inside, second-order one-sided formulas at the time
/// ends and at dirichlet space ends, periodic wrap in space otherwise.
FieldDerivatives discrete_derivatives(const SpaceTimeField& u);

/// Squared L2 norm sum_i m_i v_i^2.
double l2_norm_squared(std::span<const double> v, const SpaceGrid& grid);

}  // namespace wie
