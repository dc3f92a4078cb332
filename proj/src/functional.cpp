#include "wie/functional.hpp"

#include <algorithm>
#include <cmath>

#include "wie/errors.hpp"

namespace wie {

WieProblem WieProblem::make(double eps, double r, InitialData data, TimeGrid time, SpaceGrid space,
                            Forcing forcing, double eps_F, double power_reg) {
  if (!(eps_F > 0.0 && eps_F < 0.5)) throw ParameterError("problem: eps_F must lie in (0, 1/2)");
  if (!(eps > 0.0 && eps < eps_F)) throw ParameterError("problem: eps must lie in (0, eps_F)");
  if (!(r > 1.0) || !std::isfinite(r)) throw ParameterError("problem: r must exceed 1");
  if (!time.is_weighted() || std::abs(time.decay_scale() - 1.0) > 1e-12)
    throw ParameterError("problem: the time grid must carry the weight e^{-t}");
  if (time.size() < 4) throw ParameterError("problem: need at least 4 time nodes");
  if (data.w0.size() != space.size() || data.w1.size() != space.size())
    throw ShapeError("problem: initial data do not match the space grid");
  if (power_reg < 0.0) power_reg = r < 2.0 ? default_power_reg : 0.0;
  if (r >= 2.0) power_reg = 0.0;
  return WieProblem{eps, eps_F, r, power_reg, std::move(data), std::move(time), std::move(space),
                    std::move(forcing)};
}

std::vector<double> WieProblem::second_layer() const {
  std::vector<double> v(space.size());
  const double c = time.spacing() * eps;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = data.w0[i] + c * data.w1[i];
  return v;
}

// ---------------------------------------------------------------------------
// Potential

double power_density(double v, double r, double delta) {
  if (delta > 0.0) return (std::pow(v * v + delta * delta, 0.5 * r) - std::pow(delta, r)) / r;
  if (r == 2.0) return 0.5 * v * v;
  if (r == 4.0) {
    const double v2 = v * v;
    return 0.25 * v2 * v2;
  }
  return std::pow(std::abs(v), r) / r;
}

double power_derivative(double v, double r, double delta) {
  if (delta > 0.0) return std::pow(v * v + delta * delta, 0.5 * (r - 2.0)) * v;
  if (r == 2.0) return v;
  if (r == 4.0) return v * v * v;
  if (v == 0.0) {
    if (r < 2.0) throw SingularityError("|v|^{r-2} v is singular at v = 0 for r < 2 without regularization");
    return 0.0;
  }
  return std::pow(std::abs(v), r - 2.0) * v;
}

namespace {

void check_size(std::span<const double> v, const SpaceGrid& grid, const char* what) {
  if (v.size() != grid.size()) throw ShapeError(std::string(what) + ": length mismatch");
}

std::size_t n_cells(const SpaceGrid& grid) {
  return grid.boundary() == Boundary::periodic ? grid.size() : grid.size() - 1;
}

}  // namespace

double potential_W(std::span<const double> v, double r, const SpaceGrid& grid, double delta) {
  check_size(v, grid, "potential_W");
  const std::size_t n = grid.size();
  const double hx = grid.spacing();
  double grad = 0.0;
  for (std::size_t c = 0; c < n_cells(grid); ++c) {
    const double d = v[(c + 1) % n] - v[c];
    grad += d * d;
  }
  const auto m = grid.weights();
  double pw = 0.0;
  for (std::size_t i = 0; i < n; ++i) pw += m[i] * power_density(v[i], r, delta);
  return 0.5 * grad / hx + pw;
}

double pairing_DW(std::span<const double> v, std::span<const double> h, double r, const SpaceGrid& grid,
                  double delta) {
  check_size(v, grid, "pairing_DW");
  check_size(h, grid, "pairing_DW");
  const std::size_t n = grid.size();
  double grad = 0.0;
  for (std::size_t c = 0; c < n_cells(grid); ++c) {
    const std::size_t k = (c + 1) % n;
    grad += (v[k] - v[c]) * (h[k] - h[c]);
  }
  const auto m = grid.weights();
  double pw = 0.0;
  for (std::size_t i = 0; i < n; ++i) pw += m[i] * power_derivative(v[i], r, delta) * h[i];
  return grad / grid.spacing() + pw;
}

std::vector<double> potential_gradient(std::span<const double> v, double r, const SpaceGrid& grid,
                                       double delta) {
  check_size(v, grid, "potential_gradient");
  const std::size_t n = grid.size();
  const double inv_h = 1.0 / grid.spacing();
  std::vector<double> g(n, 0.0);
  for (std::size_t c = 0; c < n_cells(grid); ++c) {
    const std::size_t k = (c + 1) % n;
    const double d = (v[k] - v[c]) * inv_h;
    g[k] += d;
    g[c] -= d;
  }
  const auto m = grid.weights();
  for (std::size_t i = 0; i < n; ++i) g[i] += m[i] * power_derivative(v[i], r, delta);
  return g;
}

// ---------------------------------------------------------------------------
// Functional

void check_constraints(const SpaceTimeField& u, const WieProblem& prob, double tol) {
  if (u.nt() != prob.time.size() || u.nx() != prob.space.size())
    throw ShapeError("field shape does not match the problem grids");
  const auto second = prob.second_layer();
  for (std::size_t i = 0; i < u.nx(); ++i) {
    const double a = prob.data.w0[i];
    const double b = second[i];
    if (std::abs(u(0, i) - a) > tol * (1.0 + std::abs(a)) || std::abs(u(1, i) - b) > tol * (1.0 + std::abs(b)))
      throw ConstraintError("initial layers do not match u(0) = w0, u(ht) = w0 + ht eps w1");
  }
}

SpaceTimeField second_time_difference(const SpaceTimeField& u) {
  const std::size_t nt = u.nt();
  const std::size_t nx = u.nx();
  if (nt < 4) throw ShapeError("second_time_difference: need at least 4 time nodes");
  const double inv = 1.0 / (u.time_grid().spacing() * u.time_grid().spacing());
  SpaceTimeField d(u.time_grid(), u.space_grid());
  for (std::size_t i = 0; i < nx; ++i) {
    d(0, i) = (2.0 * u(0, i) - 5.0 * u(1, i) + 4.0 * u(2, i) - u(3, i)) * inv;
    d(nt - 1, i) = (2.0 * u(nt - 1, i) - 5.0 * u(nt - 2, i) + 4.0 * u(nt - 3, i) - u(nt - 4, i)) * inv;
  }
  for (std::size_t j = 1; j + 1 < nt; ++j) {
    for (std::size_t i = 0; i < nx; ++i) d(j, i) = (u(j + 1, i) - 2.0 * u(j, i) + u(j - 1, i)) * inv;
  }
  return d;
}

namespace {

struct RawParts {
  double inertia_sq = 0.0;  // sum_j w_j ||D2 u||^2
  double potential = 0.0;
};

RawParts raw_parts(const SpaceTimeField& u, double r, double delta) {
  const auto d2 = second_time_difference(u);
  const auto wt = u.time_grid().weights();
  RawParts p;
  for (std::size_t j = 0; j < u.nt(); ++j) {
    p.inertia_sq += wt[j] * l2_norm_squared(d2.layer(j), u.space_grid());
    p.potential += wt[j] * potential_W(u.layer(j), r, u.space_grid(), delta);
  }
  return p;
}

}  // namespace

JParts evaluate_J_parts(const SpaceTimeField& u, const WieProblem& prob) {
  check_constraints(u, prob);
  const RawParts p = raw_parts(u, prob.r, prob.power_reg);
  JParts out;
  out.inertia = p.inertia_sq / (2.0 * prob.eps * prob.eps);
  out.potential = p.potential;
  out.forcing = phi_eps(u, prob.forcing, prob.eps);
  return out;
}

double evaluate_J(const SpaceTimeField& u, const WieProblem& prob) { return evaluate_J_parts(u, prob).total(); }

SpaceTimeField gradient_J(const SpaceTimeField& u, const WieProblem& prob) {
  check_constraints(u, prob);
  const std::size_t nt = u.nt();
  const std::size_t nx = u.nx();
  const auto wt = prob.time.weights();
  const auto m = prob.space.weights();
  const double ht = prob.time.spacing();
  const double c_in = 1.0 / (prob.eps * prob.eps * ht * ht);

  SpaceTimeField g(prob.time, prob.space);
  const auto d2 = second_time_difference(u);

  // inertia: (1/eps^2) D2^T diag(w) D2 u, space-weighted by m
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double a = c_in * wt[j] * m[i] * d2(j, i);
      if (j == 0 || j + 1 == nt) {
        const std::size_t s = j == 0 ? 0 : nt - 1;
        const std::ptrdiff_t dir = j == 0 ? 1 : -1;
        g(s, i) += 2.0 * a;
        g(s + dir, i) -= 5.0 * a;
        g(s + 2 * dir, i) += 4.0 * a;
        g(s + 3 * dir, i) -= a;
      } else {
        g(j - 1, i) += a;
        g(j, i) -= 2.0 * a;
        g(j + 1, i) += a;
      }
    }
  }

  for (std::size_t j = 2; j < nt; ++j) {
    const auto dw = potential_gradient(u.layer(j), prob.r, prob.space, prob.power_reg);
    const double t = prob.eps * prob.time.t(j);
    for (std::size_t i = 0; i < nx; ++i) {
      double v = wt[j] * dw[i];
      if (prob.forcing.kind() != Forcing::Kind::zero)
        v -= wt[j] * m[i] * prob.forcing.G(t, prob.space.x(i), u(j, i));
      g(j, i) += v;
    }
  }

  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (!prob.is_free(j, i)) g(j, i) = 0.0;
    }
  }
  return g;
}

double scaled_residual(const SpaceTimeField& grad, const WieProblem& prob) {
  const auto wt = prob.time.weights();
  const auto m = prob.space.weights();
  double r = 0.0;
  for (std::size_t j = 2; j < grad.nt(); ++j) {
    for (std::size_t i = 0; i < grad.nx(); ++i) {
      if (!prob.is_free(j, i)) continue;
      r = std::max(r, std::abs(grad(j, i)) / (wt[j] * m[i]));
    }
  }
  return r;
}

double evaluate_F_original(const SpaceTimeField& w, double eps, double r, const Forcing& forcing,
                           double delta) {
  if (!(eps > 0.0)) throw ParameterError("evaluate_F_original: eps must be positive");
  const auto& tg = w.time_grid();
  if (!tg.is_weighted() || std::abs(tg.decay_scale() - eps) > 1e-12 * eps)
    throw ParameterError("evaluate_F_original: time grid must carry the weight e^{-t/eps}");
  const RawParts p = raw_parts(w, r, delta);
  return 0.5 * eps * eps * p.inertia_sq + p.potential - weighted_forcing_integral(w, forcing, 1.0);
}

// ---------------------------------------------------------------------------
// Estimates

double weighted_l2(const SpaceTimeField& u) {
  const auto wt = u.time_grid().weights();
  double s = 0.0;
  for (std::size_t j = 0; j < u.nt(); ++j) s += wt[j] * l2_norm_squared(u.layer(j), u.space_grid());
  return s;
}

bool ElementaryEstimates::hold(double slack) const {
  const double f = 1.0 + slack;
  return lhs_u <= f * rhs_u && lhs_ut <= f * rhs_ut && lhs_prime <= f * rhs_prime &&
         lhs_second <= f * rhs_second;
}

ElementaryEstimates elementary_estimates(const SpaceTimeField& u, const WieProblem& prob) {
  const auto d = discrete_derivatives(u);
  const double iu = weighted_l2(u);
  const double iut = weighted_l2(d.u_t);
  const double iutt = weighted_l2(d.u_tt);
  const double n0 = l2_norm_squared(u.layer(0), u.space_grid());
  const double n1 = l2_norm_squared(d.u_t.layer(0), u.space_grid());
  const double w0 = l2_norm_squared(prob.data.w0, prob.space);
  const double w1 = l2_norm_squared(prob.data.w1, prob.space);
  ElementaryEstimates e;
  e.lhs_u = iu;
  e.rhs_u = 2.0 * n0 + 4.0 * iut;
  e.lhs_ut = iut;
  e.rhs_ut = 2.0 * n1 + 4.0 * iutt;
  e.lhs_prime = iut;
  e.rhs_prime = 2.0 * w1 + 4.0 * iutt;
  e.lhs_second = iu;
  e.rhs_second = 2.0 * w0 + 8.0 * w1 + 16.0 * iutt;
  return e;
}

LowerBoundCheck lower_bound_chain(const SpaceTimeField& u, const WieProblem& prob, double C_F, double K_star) {
  const JParts parts = evaluate_J_parts(u, prob);
  const double iutt = 2.0 * prob.eps * prob.eps * parts.inertia;
  const double w0 = l2_norm_squared(prob.data.w0, prob.space);
  const double w1 = l2_norm_squared(prob.data.w1, prob.space);
  LowerBoundCheck c;
  c.J = parts.total();
  c.bound = -(C_F + 16.0 * K_star + w0 / 32.0 + w1 / 8.0) - 0.25 * iutt + parts.inertia;
  c.phi_abs = std::abs(parts.forcing);
  c.phi_bound = C_F + std::sqrt(K_star) * std::sqrt(weighted_l2(u));
  return c;
}

}  // namespace wie
