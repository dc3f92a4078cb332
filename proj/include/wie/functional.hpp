#pragma once

#include <span>
#include <vector>

#include "wie/core.hpp"
#include "wie/forcing.hpp"

namespace wie {

/// One instance of the constrained minimization problem on the rescaled grid.
struct WieProblem {
  double eps = 0.1;
  double eps_F = 0.45;
  double r = 2.0;
  double power_reg = 0.0;  // delta for 1 < r < 2
  InitialData data;
  TimeGrid time;
  SpaceGrid space;
  Forcing forcing;

  static constexpr double default_power_reg = 1e-8;

  /// Validates the parameters; a negative power_reg picks the default
  /// (1e-8 when r < 2, 0 otherwise).
  static WieProblem make(double eps, double r, InitialData data, TimeGrid time, SpaceGrid space,
                         Forcing forcing = Forcing::zero(), double eps_F = 0.45, double power_reg = -1.0);

  /// Layer 1 is pinned to w0 + ht eps w1.
  std::vector<double> second_layer() const;

  bool is_free(std::size_t j, std::size_t i) const { return j >= 2 && !space.is_fixed(i); }
};

/// (1/r)|v|^r, regularized as (1/r)((v^2+delta^2)^{r/2} - delta^r) when delta > 0.
double power_density(double v, double r, double delta);
/// Derivative of power_density: |v|^{r-2} v or (v^2+delta^2)^{(r-2)/2} v.
double power_derivative(double v, double r, double delta);

/// W(v) = 1/2 sum_cells (v_{i+1}-v_i)^2/hx + sum_i m_i power_density(v_i).
double potential_W(std::span<const double> v, double r, const SpaceGrid& grid, double delta = 0.0);

/// (DW(v), h) for the discrete W. Throws SingularityError when r < 2,
/// delta = 0 and v vanishes on a node.
double pairing_DW(std::span<const double> v, std::span<const double> h, double r, const SpaceGrid& grid,
                  double delta = 0.0);

/// Nodal gradient dW/dv_i of the discrete W.
std::vector<double> potential_gradient(std::span<const double> v, double r, const SpaceGrid& grid,
                                       double delta = 0.0);

struct JParts {
  double inertia = 0.0;    // int e^{-t} (1/(2 eps^2)) ||u''||^2
  double potential = 0.0;  // int e^{-t} W(u)
  double forcing = 0.0;    // Phi_eps(u)
  double total() const { return inertia + potential - forcing; }
  double energy() const { return inertia + potential; }
};

/// Throws ConstraintError unless layers 0 and 1 match the initial data.
void check_constraints(const SpaceTimeField& u, const WieProblem& prob, double tol = 1e-10);

/// Second time difference with the one-sided four-point formula at both ends.
SpaceTimeField second_time_difference(const SpaceTimeField& u);

JParts evaluate_J_parts(const SpaceTimeField& u, const WieProblem& prob);
double evaluate_J(const SpaceTimeField& u, const WieProblem& prob);

/// Exact gradient of evaluate_J with respect to the free nodes; zero on the
/// two constrained layers and on fixed boundary nodes.
SpaceTimeField gradient_J(const SpaceTimeField& u, const WieProblem& prob);

/// max over free nodes of |g_ji| / (w_j m_i), the gradient measured as a
/// pointwise residual of the discrete Euler-Lagrange equation.
double scaled_residual(const SpaceTimeField& grad, const WieProblem& prob);

/// Discrete original functional on a physical-time grid with weight
/// e^{-t/eps}. For w(t) = u(t/eps) it equals eps * J_eps(u).
double evaluate_F_original(const SpaceTimeField& w, double eps, double r, const Forcing& forcing,
                           double delta = 0.0);

struct ElementaryEstimates {
  // int e^{-t}||u||^2 <= 2||u(0)||^2 + 4 int e^{-t}||u'||^2
  double lhs_u = 0.0, rhs_u = 0.0;
  // the same with u replaced by u'
  double lhs_ut = 0.0, rhs_ut = 0.0;
  // int e^{-t}||u'||^2 <= 2||w1||^2 + 4 int e^{-t}||u''||^2
  double lhs_prime = 0.0, rhs_prime = 0.0;
  // int e^{-t}||u||^2 <= 2||w0||^2 + 8||w1||^2 + 16 int e^{-t}||u''||^2
  double lhs_second = 0.0, rhs_second = 0.0;

  bool hold(double slack) const;
};

ElementaryEstimates elementary_estimates(const SpaceTimeField& u, const WieProblem& prob);

struct LowerBoundCheck {
  double J = 0.0;
  double bound = 0.0;  // -(C_F + 16K* + |w0|^2/32 + |w1|^2/8) + (1/(2eps^2) - 1/4) int e^{-t}||u''||^2
  double phi_abs = 0.0;
  double phi_bound = 0.0;  // C_F + sqrt(K*) (int e^{-t}||u||^2)^{1/2}
  bool holds(double tol = 1e-10) const { return J >= bound - tol && phi_abs <= phi_bound + tol; }
};

LowerBoundCheck lower_bound_chain(const SpaceTimeField& u, const WieProblem& prob, double C_F, double K_star);

/// sum_j w_j ||u(t_j)||^2 with the time weights of u.
double weighted_l2(const SpaceTimeField& u);

}  // namespace wie
