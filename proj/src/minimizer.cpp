#include "wie/minimizer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "wie/errors.hpp"
#include "wie/kernels.hpp"

namespace wie {

Method parse_method(const std::string& name) {
  if (name == "lbfgs") return Method::lbfgs;
  if (name == "gradient_descent") return Method::gradient_descent;
  throw ConfigError("unknown method '" + name + "' (expected lbfgs|gradient_descent)");
}

std::string to_string(Method m) { return m == Method::lbfgs ? "lbfgs" : "gradient_descent"; }

void MinimizeOptions::validate() const {
  if (!(grad_tol > 0.0)) throw ParameterError("minimize: grad_tol must be positive");
  if (memory < 3) throw ParameterError("minimize: L-BFGS memory must be at least 3");
  if (max_iters < 0) throw ParameterError("minimize: max_iters must be non-negative");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 0.5)) throw ParameterError("minimize: armijo_c1 must lie in (0, 1/2)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ParameterError("minimize: backtrack must lie in (0, 1)");
  if (seed_kind == SeedKind::custom && !custom_seed)
    throw ParameterError("minimize: custom seed requested but none supplied");
}

// ---------------------------------------------------------------------------
// Constants

ForcingConstants forcing_constants(const WieProblem& prob) {
  ForcingConstants fc;
  if (prob.forcing.kind() == Forcing::Kind::zero) return fc;
  fc.C_F = estimate_C_F(prob.forcing, prob.space, prob.eps_F).value;
  fc.K_star = k_star(prob.forcing.f_norm(prob.space), prob.eps_F, 0.0);
  return fc;
}

namespace {

double gradient_norm_squared(std::span<const double> v, const SpaceGrid& grid) {
  const std::size_t n = grid.size();
  const std::size_t cells = grid.boundary() == Boundary::periodic ? n : n - 1;
  double s = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double d = v[(c + 1) % n] - v[c];
    s += d * d;
  }
  return s / grid.spacing();
}

double lr_norm_r(std::span<const double> v, double r, const SpaceGrid& grid) {
  const auto m = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += m[i] * std::pow(std::abs(v[i]), r);
  return s;
}

}  // namespace

double basic_energy_constant(const WieProblem& prob, const ForcingConstants& fc) {
  const auto& g = prob.space;
  const auto& w0 = prob.data.w0;
  const auto& w1 = prob.data.w1;
  const double n0 = l2_norm_squared(w0, g);
  const double n1 = l2_norm_squared(w1, g);
  const double b_seed = gradient_norm_squared(w0, g) + gradient_norm_squared(w1, g) +
                        std::pow(2.0, prob.r - 1.0) * std::tgamma(prob.r + 1.0) *
                            (lr_norm_r(w0, prob.r, g) + lr_norm_r(w1, prob.r, g)) +
                        fc.C_F + std::sqrt(fc.K_star) * std::sqrt(2.0 * n0 + n1);
  return 2.0 * (1.0 + b_seed + fc.C_F + 16.0 * fc.K_star + n0 / 32.0 + n1 / 8.0);
}

// ---------------------------------------------------------------------------
// Seeds and grids

SpaceTimeField affine_seed(const WieProblem& prob) {
  SpaceTimeField u(prob.time, prob.space);
  for (std::size_t j = 0; j < u.nt(); ++j) {
    const double c = prob.eps * prob.time.t(j);
    for (std::size_t i = 0; i < u.nx(); ++i) u(j, i) = prob.data.w0[i] + c * prob.data.w1[i];
  }
  const auto second = prob.second_layer();
  for (std::size_t i = 0; i < u.nx(); ++i) u(1, i) = second[i];
  return u;
}

SpaceTimeField random_seed(const WieProblem& prob, std::uint64_t seed, double amplitude) {
  SpaceTimeField u = affine_seed(prob);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double L = prob.space.half_length();
  const double T = prob.time.horizon();
  const double ht = prob.time.spacing();
  const bool periodic = prob.space.boundary() == Boundary::periodic;
  constexpr int modes = 4;
  double a[modes][3];
  for (auto& row : a)
    for (double& v : row) v = coef(rng);
  for (std::size_t j = 2; j < u.nt(); ++j) {
    const double s = (prob.time.t(j) - ht) / T;
    const double basis_t[3] = {s * s, s * s * s, s * s * std::exp(-5.0 * s)};
    for (std::size_t i = 0; i < u.nx(); ++i) {
      if (!prob.is_free(j, i)) continue;
      const double x = prob.space.x(i);
      double v = 0.0;
      for (int k = 0; k < modes; ++k) {
        const double px = periodic ? std::cos(M_PI * k * x / L) : std::sin(M_PI * (k + 1) * (x + L) / (2.0 * L));
        for (int p = 0; p < 3; ++p) v += a[k][p] * px * basis_t[p];
      }
      u(j, i) += amplitude * v;
    }
  }
  return u;
}

double rescaled_horizon(double T_phys, double eps) {
  if (!(eps > 0.0)) throw ParameterError("rescaled_horizon: eps must be positive");
  if (!(T_phys > 0.0)) throw ParameterError("rescaled_horizon: T_phys must be positive");
  return std::max(T_phys / eps, 21.0) + 5.0;
}

TimeGrid rescaled_time_grid(double T_phys, double eps, double ht) {
  return TimeGrid::weighted_with_spacing(rescaled_horizon(T_phys, eps), ht, 1.0);
}

SpaceTimeField rescale(const SpaceTimeField& u_eps, double eps, const TimeGrid& physical) {
  if (!(eps > 0.0)) throw ParameterError("rescale: eps must be positive");
  const auto& tg = u_eps.time_grid();
  const double ht = tg.spacing();
  const std::size_t nt = u_eps.nt();
  if (physical.horizon() > eps * tg.horizon() * (1.0 + 1e-12))
    throw RangeError("rescale: physical horizon exceeds eps * T_resc");
  SpaceTimeField w(physical, u_eps.space_grid());
  for (std::size_t jp = 0; jp < physical.size(); ++jp) {
    const double s = physical.t(jp) / eps;
    const double q = s / ht;
    const auto k = static_cast<std::ptrdiff_t>(std::floor(q + 1e-12));
    if (std::abs(q - std::round(q)) < 1e-10) {
      const auto node = static_cast<std::size_t>(std::min<double>(std::round(q), static_cast<double>(nt - 1)));
      for (std::size_t i = 0; i < w.nx(); ++i) w(jp, i) = u_eps(node, i);
      continue;
    }
    std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(k - 1, 0, static_cast<std::ptrdiff_t>(nt) - 4);
    double lw[4];
    for (int a = 0; a < 4; ++a) {
      const double ta = static_cast<double>(start + a);
      double l = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (b == a) continue;
        const double tb = static_cast<double>(start + b);
        l *= (q - tb) / (ta - tb);
      }
      lw[a] = l;
    }
    for (std::size_t i = 0; i < w.nx(); ++i) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += lw[a] * u_eps(static_cast<std::size_t>(start + a), i);
      w(jp, i) = v;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Preconditioner

struct SeparablePreconditioner::Factors {
  Eigen::SparseMatrix<double> A;  // D2^T diag(w) D2 on free layers, unscaled
  Eigen::VectorXd w;              // time weights of free layers
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>> blocks;
  std::vector<Eigen::SparseMatrix<double>> mats;
};

SeparablePreconditioner::SeparablePreconditioner(const WieProblem& prob)
    : prob_(&prob), factors_(std::make_unique<Factors>()) {
  const std::size_t nt = prob.time.size();
  n_layers_ = nt - 2;
  for (std::size_t i = 0; i < prob.space.size(); ++i)
    if (!prob.space.is_fixed(i)) free_nodes_.push_back(i);
  const auto nf = static_cast<Eigen::Index>(free_nodes_.size());
  const double hx = prob.space.spacing();

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf, nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    K(a, a) = 2.0 / hx;
    if (a + 1 < nf) K(a, a + 1) = K(a + 1, a) = -1.0 / hx;
  }
  if (prob.space.boundary() == Boundary::periodic && nf >= 3) {
    K(0, nf - 1) += -1.0 / hx;
    K(nf - 1, 0) += -1.0 / hx;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  modes_ = es.eigenvectors();
  lambda_ = es.eigenvalues().cwiseMax(0.0);

  const auto wt = prob.time.weights();
  const double ht = prob.time.spacing();
  const double inv = 1.0 / (ht * ht);
  // D2 rows over all nt nodes, columns over layers j >= 2
  std::vector<Eigen::Triplet<double>> trip;
  const auto add = [&](std::size_t row, std::size_t col, double v) {
    if (col >= 2) trip.emplace_back(static_cast<int>(row), static_cast<int>(col - 2), v * inv);
  };
  add(0, 0, 2.0), add(0, 1, -5.0), add(0, 2, 4.0), add(0, 3, -1.0);
  for (std::size_t j = 1; j + 1 < nt; ++j) add(j, j - 1, 1.0), add(j, j, -2.0), add(j, j + 1, 1.0);
  add(nt - 1, nt - 1, 2.0), add(nt - 1, nt - 2, -5.0), add(nt - 1, nt - 3, 4.0), add(nt - 1, nt - 4, -1.0);
  Eigen::SparseMatrix<double> D(static_cast<int>(nt), static_cast<int>(n_layers_));
  D.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd wv(static_cast<Eigen::Index>(nt));
  for (std::size_t j = 0; j < nt; ++j) wv(static_cast<Eigen::Index>(j)) = wt[j];
  factors_->A = D.transpose() * wv.asDiagonal() * D;
  factors_->w = wv.tail(static_cast<Eigen::Index>(n_layers_));

  c_.assign(n_layers_, prob.r == 2.0 ? 1.0 : 0.0);
  factor();
}

SeparablePreconditioner::~SeparablePreconditioner() = default;

void SeparablePreconditioner::update_curvature(const SpaceTimeField& u) {
  const auto& prob = *prob_;
  const auto m = prob.space.weights();
  const double hx = prob.space.spacing();
  double mass = 0.0;
  for (std::size_t i : free_nodes_) mass += m[i];
  const double cap = 4.0 / (hx * hx);
  for (std::size_t l = 0; l < n_layers_; ++l) {
    double s = 0.0;
    for (std::size_t i : free_nodes_) {
      const double v = u(l + 2, i);
      double h;
      if (prob.power_reg > 0.0) {
        const double q = v * v + prob.power_reg * prob.power_reg;
        h = std::pow(q, 0.5 * (prob.r - 4.0)) * ((prob.r - 1.0) * v * v + prob.power_reg * prob.power_reg);
      } else if (prob.r == 2.0) {
        h = 1.0;
      } else {
        h = (prob.r - 1.0) * std::pow(std::abs(v), prob.r - 2.0);
      }
      s += m[i] * std::min(h, cap);
    }
    c_[l] = s / mass;
  }
  factor();
}

void SeparablePreconditioner::factor() {
  const auto& prob = *prob_;
  const double hx = prob.space.spacing();
  const double ie2 = 1.0 / (prob.eps * prob.eps);
  const auto n = static_cast<Eigen::Index>(n_layers_);
  auto& f = *factors_;
  f.blocks.clear();
  f.mats.clear();
  f.blocks.resize(static_cast<std::size_t>(lambda_.size()));
  f.mats.resize(static_cast<std::size_t>(lambda_.size()));
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) {
    Eigen::SparseMatrix<double> B = (hx * ie2) * f.A;
    for (Eigen::Index l = 0; l < n; ++l)
      B.coeffRef(l, l) += f.w(l) * (lambda_(k) + hx * c_[static_cast<std::size_t>(l)]);
    B.makeCompressed();
    auto& solver = f.blocks[static_cast<std::size_t>(k)];
    solver = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(B);
    if (solver->info() != Eigen::Success) throw OptimizerError("preconditioner factorization failed");
    f.mats[static_cast<std::size_t>(k)] = std::move(B);
  }
}

Eigen::VectorXd SeparablePreconditioner::apply(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(n_layers_);
  const auto nf = static_cast<Eigen::Index>(free_nodes_.size());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(x.data(), n, nf);
  Eigen::MatrixXd Xh = X * modes_;
  for (Eigen::Index k = 0; k < nf; ++k) Xh.col(k) = factors_->mats[static_cast<std::size_t>(k)] * Xh.col(k);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Y = Xh * modes_.transpose();
  return Eigen::Map<const Eigen::VectorXd>(Y.data(), Y.size());
}

Eigen::VectorXd SeparablePreconditioner::solve(const Eigen::VectorXd& b) const {
  const auto n = static_cast<Eigen::Index>(n_layers_);
  const auto nf = static_cast<Eigen::Index>(free_nodes_.size());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Bm(b.data(), n, nf);
  Eigen::MatrixXd Bh = Bm * modes_;
  for (Eigen::Index k = 0; k < nf; ++k)
    Bh.col(k) = factors_->blocks[static_cast<std::size_t>(k)]->solve(Bh.col(k));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Y = Bh * modes_.transpose();
  return Eigen::Map<const Eigen::VectorXd>(Y.data(), Y.size());
}

Eigen::VectorXd pack_free(const SpaceTimeField& u, const SeparablePreconditioner& P) {
  const auto& nodes = P.free_nodes();
  Eigen::VectorXd x(static_cast<Eigen::Index>(P.size()));
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < P.n_free_layers(); ++l)
    for (std::size_t i : nodes) x(k++) = u(l + 2, i);
  return x;
}

void unpack_free(const Eigen::VectorXd& x, const SeparablePreconditioner& P, SpaceTimeField& u) {
  const auto& nodes = P.free_nodes();
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < P.n_free_layers(); ++l)
    for (std::size_t i : nodes) u(l + 2, i) = x(k++);
}

// ---------------------------------------------------------------------------
// Minimization

namespace {

struct Evaluator {
  const WieProblem& prob;
  const SeparablePreconditioner& P;
  SpaceTimeField work;
  int count = 0;

  struct Point {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd g;
    double residual = 0.0;
  };

  Point eval(const Eigen::VectorXd& x) {
    ++count;
    unpack_free(x, P, work);
    Point p;
    p.x = x;
    p.f = evaluate_J(work, prob);
    const auto grad = gradient_J(work, prob);
    p.g = pack_free(grad, P);
    p.residual = scaled_residual(grad, prob);
    if (!std::isfinite(p.f) || !p.g.allFinite()) throw OptimizerError("non-finite functional value or gradient");
    return p;
  }
};

}  // namespace

MinimizeResult minimize(const WieProblem& prob, const MinimizeOptions& opts) {
  opts.validate();
  SpaceTimeField seed = [&] {
    switch (opts.seed_kind) {
      case SeedKind::custom:
        return *opts.custom_seed;
      case SeedKind::random:
        return random_seed(prob, opts.random_seed, opts.random_amplitude);
      default:
        return affine_seed(prob);
    }
  }();
  check_constraints(seed, prob);

  MinimizeResult res{.u_eps = seed};
  res.constants = forcing_constants(prob);
  res.energy_bound = basic_energy_constant(prob, res.constants);
  const SpaceTimeField affine = affine_seed(prob);
  res.J_seed = evaluate_J(affine, prob);

  SeparablePreconditioner P(prob);
  Evaluator ev{prob, P, seed};
  if (P.size() == 0) {
    res.J_value = evaluate_J(seed, prob);
    res.converged = true;
    res.status = "no free variables";
  } else {
    if (prob.r != 2.0 || prob.power_reg > 0.0) P.update_curvature(seed);
    auto cur = ev.eval(pack_free(seed, P));
    res.history.push_back(cur.f);

    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> mem;  // (s, y)
    int it = 0;
    res.status = "max_iters reached";
    const bool refresh = prob.r != 2.0 || prob.power_reg > 0.0;
    for (;; ++it) {
      if (cur.residual <= opts.grad_tol) {
        res.converged = true;
        res.status = "converged";
        break;
      }
      if (it >= opts.max_iters) break;
      if (refresh && it > 0 && it % opts.precond_refresh == 0) {
        unpack_free(cur.x, P, ev.work);
        P.update_curvature(ev.work);
      }

      Eigen::VectorXd d;
      if (opts.method == Method::lbfgs && !mem.empty()) {
        Eigen::VectorXd q = cur.g;
        std::vector<double> alpha(mem.size());
        for (std::size_t k = mem.size(); k-- > 0;) {
          const auto& [s, y] = mem[k];
          alpha[k] = s.dot(q) / y.dot(s);
          q -= alpha[k] * y;
        }
        const auto& [s_last, y_last] = mem.back();
        const Eigen::VectorXd Py = P.solve(y_last);
        const double gamma = s_last.dot(y_last) / y_last.dot(Py);
        Eigen::VectorXd r = gamma * P.solve(q);
        for (std::size_t k = 0; k < mem.size(); ++k) {
          const auto& [s, y] = mem[k];
          const double beta = y.dot(r) / y.dot(s);
          r += (alpha[k] - beta) * s;
        }
        d = -r;
      } else {
        d = -P.solve(cur.g);
      }
      double slope = cur.g.dot(d);
      if (!(slope < 0.0)) {
        mem.clear();
        d = -P.solve(cur.g);
        slope = cur.g.dot(d);
      }

      double step = 1.0;
      bool accepted = false;
      Evaluator::Point next;
      const double f_tol = 1e-13 * std::max(1.0, std::abs(cur.f));
      for (int b = 0; b < opts.max_backtracks; ++b) {
        next = ev.eval(cur.x + step * d);
        if (next.f <= cur.f + opts.armijo_c1 * step * slope) {
          accepted = true;
          break;
        }
        // near the roundoff floor of f, fall back to a slope condition
        const double new_slope = next.g.dot(d);
        if (next.f <= cur.f + f_tol && new_slope <= -0.8 * slope && new_slope >= 0.9 * slope) {
          accepted = true;
          break;
        }
        step *= opts.backtrack;
      }
      if (!accepted) {
        if (std::abs(slope) <= 1e-12 * std::max(1.0, std::abs(cur.f))) {
          res.status = "stalled at roundoff floor";
          break;
        }
        throw OptimizerError("line search failed at iteration " + std::to_string(it) +
                             " (J = " + std::to_string(cur.f) + ", residual = " + std::to_string(cur.residual) +
                             ", slope = " + std::to_string(slope) + ")");
      }

      Eigen::VectorXd s = next.x - cur.x;
      Eigen::VectorXd y = next.g - cur.g;
      const double sy = s.dot(y);
      if (opts.method == Method::lbfgs && sy > 1e-14 * s.norm() * y.norm()) {
        mem.emplace_back(std::move(s), std::move(y));
        if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
      }
      cur = std::move(next);
      res.history.push_back(cur.f);
    }
    res.iterations = it;
    unpack_free(cur.x, P, ev.work);
    res.u_eps = ev.work;
    res.grad_norm = cur.residual;
  }
  res.evaluations = ev.count;
  res.parts = evaluate_J_parts(res.u_eps, prob);
  res.J_value = res.parts.total();
  res.weighted_energy = res.parts.energy();
  if (res.grad_norm == 0.0) res.grad_norm = scaled_residual(gradient_J(res.u_eps, prob), prob);
  return res;
}

}  // namespace wie
