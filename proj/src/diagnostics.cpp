#include "wie/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "wie/errors.hpp"
#include "wie/io.hpp"

namespace wie {

namespace {

double kinetic_from(const SpaceTimeField& u, double eps, std::size_t j) {
  const std::size_t nt = u.nt();
  const std::size_t nx = u.nx();
  const double ht = u.time_grid().spacing();
  const auto m = u.space_grid().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    double ut;
    if (j == 0)
      ut = (-3.0 * u(0, i) + 4.0 * u(1, i) - u(2, i)) / (2.0 * ht);
    else if (j + 1 == nt)
      ut = (3.0 * u(j, i) - 4.0 * u(j - 1, i) + u(j - 2, i)) / (2.0 * ht);
    else
      ut = (u(j + 1, i) - u(j - 1, i)) / (2.0 * ht);
    acc += m[i] * ut * ut;
  }
  return acc / (2.0 * eps * eps);
}

std::vector<double> potential_series(const SpaceTimeField& u, const WieProblem& prob) {
  std::vector<double> W(u.nt());
  for (std::size_t j = 0; j < u.nt(); ++j) W[j] = potential_W(u.layer(j), prob.r, prob.space, prob.power_reg);
  return W;
}

double forward_from(const std::vector<double>& W, const TimeGrid& grid, std::size_t j) {
  const std::size_t n = W.size() - j;
  if (n < 2) return 0.0;
  const auto w = exp_trapezoid_weights(n, grid.spacing(), 1.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += w[k] * (grid.t(j + k) - grid.t(j)) * W[j + k];
  return acc;
}

void check_field(const SpaceTimeField& u, const WieProblem& prob) {
  if (u.nt() != prob.time.size() || u.nx() != prob.space.size())
    throw ShapeError("diagnostics: field does not match the problem grids");
  if (u.nt() < 3) throw ShapeError("diagnostics: need at least 3 time nodes");
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

double kinetic_energy(const SpaceTimeField& u, const WieProblem& prob, std::size_t j) {
  check_field(u, prob);
  if (j >= u.nt()) throw RangeError("kinetic_energy: node out of range");
  return kinetic_from(u, prob.eps, j);
}

double forward_potential(const SpaceTimeField& u, const WieProblem& prob, std::size_t j) {
  check_field(u, prob);
  if (j >= u.nt()) throw RangeError("forward_potential: node out of range");
  return forward_from(potential_series(u, prob), prob.time, j);
}

std::size_t energy_node_limit(const TimeGrid& grid, double tail_tol) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double tau = grid.horizon() - grid.t(j);
    if ((1.0 + tau) * std::exp(-tau) <= tail_tol) count = j + 1;
  }
  return count;
}

double approximate_energy(const SpaceTimeField& u, const WieProblem& prob, std::size_t j, double tail_tol) {
  check_field(u, prob);
  if (j >= energy_node_limit(prob.time, tail_tol)) {
    std::ostringstream os;
    os << "approximate_energy: node t = " << prob.time.t(j) << " leaves a forward window shorter than tail_tol "
       << tail_tol << " allows";
    throw RangeError(os.str());
  }
  return kinetic_from(u, prob.eps, j) + forward_potential(u, prob, j);
}

double first_moment_W(const SpaceTimeField& u, const WieProblem& prob) {
  check_field(u, prob);
  return forward_from(potential_series(u, prob), prob.time, 0);
}

QepsIntegral::QepsIntegral(const TimeFunction& f_norm, double eps, double s_max, std::size_t mesh) {
  if (!(s_max >= 0.0) || mesh < 2) throw ParameterError("QepsIntegral: need s_max >= 0 and mesh >= 2");
  ds_ = s_max > 0.0 ? s_max / static_cast<double>(mesh - 1) : 1.0;
  q_.resize(mesh);
  cum_.assign(mesh, 0.0);
  zero_ = true;
  for (std::size_t k = 0; k < mesh; ++k) {
    q_[k] = q_eps(f_norm, eps, static_cast<double>(k) * ds_);
    if (q_[k] != 0.0) zero_ = false;
    if (k > 0) cum_[k] = cum_[k - 1] + 0.5 * ds_ * (q_[k - 1] + q_[k]);
  }
}

double QepsIntegral::value(double s) const {
  if (q_.empty()) return 0.0;
  const double pos = std::clamp(s / ds_, 0.0, static_cast<double>(q_.size() - 1));
  const auto k = std::min(static_cast<std::size_t>(pos), q_.size() - 2);
  const double a = pos - static_cast<double>(k);
  return (1.0 - a) * q_[k] + a * q_[k + 1];
}

double QepsIntegral::cumulative(double s) const {
  if (q_.empty()) return 0.0;
  const double pos = std::clamp(s / ds_, 0.0, static_cast<double>(q_.size() - 1));
  const auto k = std::min(static_cast<std::size_t>(pos), q_.size() - 2);
  const double a = pos - static_cast<double>(k);
  // exact integral of the linear interpolant on the partial cell
  const double qa = (1.0 - a) * q_[k] + a * q_[k + 1];
  return cum_[k] + 0.5 * a * ds_ * (q_[k] + qa);
}

AppendixConstants appendix_constants(const SpaceTimeField& u, const WieProblem& prob, double safety_factor) {
  if (!(safety_factor >= 1.0)) throw ParameterError("appendix_constants: safety factor must be >= 1");
  AppendixConstants c;
  c.safety_factor = safety_factor;
  c.B_bar = safety_factor * first_moment_W(u, prob);
  c.Q = 0.5 * l2_norm_squared(prob.data.w1, prob.space) + c.B_bar;
  c.Q_bar = c.Q + 1.0;
  return c;
}

EnergyReport check_appendix_bound(const SpaceTimeField& u, const WieProblem& prob, const TimeFunction& f_norm,
                                  double slack, double tail_tol, double safety_factor) {
  check_field(u, prob);
  const std::size_t n_ok = energy_node_limit(prob.time, tail_tol);
  if (n_ok == 0) throw RangeError("check_appendix_bound: time horizon too short for tail_tol");
  EnergyReport rep;
  rep.tolerance = slack;
  rep.constants = appendix_constants(u, prob, safety_factor);
  const double eps = prob.eps;
  const QepsIntegral Qi(f_norm, eps, eps * prob.time.t(n_ok - 1));
  const auto W = potential_series(u, prob);
  const double E0_phys = kinetic_from(u, eps, 0) + W[0];
  rep.min_bound_margin = std::numeric_limits<double>::infinity();
  rep.min_inequality_margin = std::numeric_limits<double>::infinity();
  double f_cum = 0.0;
  double s_prev = 0.0;
  for (std::size_t j = 0; j < n_ok; ++j) {
    const double t = prob.time.t(j);
    const double s = eps * t;
    const double K = kinetic_from(u, eps, j);
    const double P = forward_from(W, prob.time, j);
    const double E = K + P;
    rep.times.push_back(t);
    rep.kinetic.push_back(K);
    rep.potential.push_back(W[j]);
    rep.approx_energy.push_back(E);
    const double bound = rep.constants.Q + (28.0 + 4.0 * s) * Qi.cumulative(s);
    const double margin = bound - E;
    rep.bound_margin.push_back(margin);
    rep.min_bound_margin = std::min(rep.min_bound_margin, margin);
    if (margin < -slack * std::max(rep.constants.Q, E)) rep.bound_ok = false;
    if (E < P - 1e-12 * std::max(1.0, std::abs(P))) rep.lower_ok = false;

    if (j > 0) f_cum += integrate([&](double x) { return f_norm(x); }, s_prev, s);
    s_prev = s;
    const double Ephys = K + W[j];
    const double im = std::sqrt(E0_phys) + std::sqrt(0.5 * s * f_cum) - std::sqrt(std::max(0.0, Ephys));
    rep.inequality_margin.push_back(im);
    rep.min_inequality_margin = std::min(rep.min_inequality_margin, im);
  }
  return rep;
}

EnergyInequality check_energy_inequality(const SpaceTimeField& w, const TimeFunction& f_norm, double r,
                                         double rel_tol) {
  if (!(rel_tol >= 0.0)) throw ParameterError("check_energy_inequality: rel_tol must be non-negative");
  EnergyInequality out;
  out.energy = solution_energy(w, r);
  out.E0 = out.energy.front();
  out.tolerance = rel_tol * out.E0;
  out.min_margin = std::numeric_limits<double>::infinity();
  const auto& tg = w.time_grid();
  double cum = 0.0;
  std::size_t ok = 0;
  for (std::size_t j = 0; j < w.nt(); ++j) {
    const double t = tg.t(j);
    if (j > 0) cum += integrate([&](double x) { return f_norm(x); }, tg.t(j - 1), t);
    const double rhs = std::sqrt(out.E0) + std::sqrt(0.5 * t * cum);
    const double margin = rhs - std::sqrt(std::max(0.0, out.energy[j]));
    out.times.push_back(t);
    out.rhs.push_back(rhs);
    out.margin.push_back(margin);
    out.min_margin = std::min(out.min_margin, margin);
    if (margin >= -out.tolerance) ++ok;
  }
  out.fraction_ok = static_cast<double>(ok) / static_cast<double>(w.nt());
  out.passed = out.min_margin >= -out.tolerance;
  return out;
}

TestFunction TestFunction::bump(double lo, double hi, double amplitude) {
  if (!(hi > lo)) throw ParameterError("TestFunction::bump: need hi > lo");
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  TestFunction tf;
  tf.support_lo = lo;
  tf.support_hi = hi;
  tf.phi = [=](double t) {
    const double y = (t - c) / h;
    if (std::abs(y) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - y * y));
  };
  return tf;
}

TestFunction TestFunction::zero() {
  TestFunction tf;
  tf.support_lo = 1.0;
  tf.support_hi = 2.0;
  tf.phi = [](double) { return 0.0; };
  return tf;
}

Lemma1Estimates check_lemma1_estimates(const SpaceTimeField& u, const WieProblem& prob, const TestFunction& phi,
                                       const TimeFunction& f_norm, double Q_bar, double slack) {
  check_field(u, prob);
  const double T = prob.time.horizon();
  const double lo = phi.support_lo, hi = phi.support_hi;
  if (!phi.phi || !(lo > 0.0) || !(hi < T) || !(hi > lo))
    throw InputError("check_lemma1_estimates: test function must be supported inside (0, T_resc)");
  const double eps = prob.eps;
  const double r = prob.r;
  const auto& sg = prob.space;
  const auto m = sg.weights();
  const double hx = sg.spacing();
  const std::size_t nx = u.nx();
  const bool periodic = sg.boundary() == Boundary::periodic;
  const QepsIntegral Qi(f_norm, eps, eps * hi);

  // A(t) = int_0^t e^s phi, B(t) = int_0^t s e^s phi, accumulated node to node
  double A = 0.0, B = 0.0;
  const auto wts = prob.time.weights();
  Lemma1Estimates est;
  for (std::size_t j = 0; j < u.nt(); ++j) {
    const double t = prob.time.t(j);
    if (j > 0) {
      const double a = std::max(lo, prob.time.t(j - 1));
      const double b = std::min(hi, t);
      if (b > a) {
        A += integrate([&](double s) { return std::exp(s) * phi.phi(s); }, a, b);
        B += integrate([&](double s) { return s * std::exp(s) * phi.phi(s); }, a, b);
      }
    }
    const double xi = std::abs(t * A - B);
    if (xi == 0.0) continue;
    double grad = 0.0, lr = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      if (i + 1 < nx || periodic) {
        const double d = u(j, (i + 1) % nx) - u(j, i);
        grad += d * d / hx;
      }
      lr += m[i] * std::pow(std::abs(u(j, i)), r);
    }
    est.lhs[0] += wts[j] * xi * std::sqrt(grad);
    est.lhs[1] += wts[j] * xi * std::pow(lr, (r - 1.0) / r);
    est.lhs[2] += wts[j] * xi * std::sqrt(std::max(0.0, f_norm(eps * t)));
  }

  const double common = integrate(
      [&](double t) { return (Q_bar + (28.0 + 4.0 * eps * t) * Qi.cumulative(eps * t)) * std::abs(phi.phi(t)); },
      lo, hi);
  est.rhs[0] = 2.0 * common;
  est.rhs[1] = r * common;
  est.rhs[2] = integrate([&](double t) { return std::abs(phi.phi(t)) * std::sqrt(Qi.value(eps * t)); }, lo, hi);
  for (int k = 0; k < 3; ++k) est.holds[k] = est.margin(k) >= -std::max(1e-6, slack * est.lhs[k]);
  return est;
}

WieProblem SweepTemplate::make(double eps) const {
  return WieProblem::make(eps, r, data, rescaled_time_grid(T_phys, eps, ht), space, forcing, eps_F, power_reg);
}

std::vector<double> ConvergenceTable::l2_errors() const {
  std::vector<double> out;
  for (const auto& run : runs) out.push_back(run.l2_error);
  return out;
}

bool ConvergenceTable::strictly_decreasing() const {
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (!(runs[k].l2_error < runs[k - 1].l2_error)) return false;
  return true;
}

std::string ConvergenceTable::csv() const {
  std::ostringstream os;
  os << "eps,l2_error,sup_error,converged,iterations,grad_norm,J\n";
  for (const auto& run : runs) {
    os << fmt_num(run.eps) << ',' << fmt_num(run.l2_error) << ',' << fmt_num(run.sup_error) << ','
       << bool_str(run.result.converged) << ',' << run.result.iterations << ',' << fmt_num(run.result.grad_norm)
       << ',' << fmt_num(run.result.J_value) << '\n';
  }
  return os.str();
}

double space_time_l2(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.nt() != b.nt() || a.nx() != b.nx()) throw ShapeError("space_time_l2: shape mismatch");
  const auto tw = trapezoid_weights(a.nt(), a.time_grid().spacing());
  const auto m = a.space_grid().weights();
  double acc = 0.0;
  for (std::size_t j = 0; j < a.nt(); ++j)
    for (std::size_t i = 0; i < a.nx(); ++i) {
      const double d = a(j, i) - b(j, i);
      acc += tw[j] * m[i] * d * d;
    }
  return std::sqrt(acc);
}

double sup_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
  if (a.nt() != b.nt() || a.nx() != b.nx()) throw ShapeError("sup_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) s = std::max(s, std::abs(a.values()[k] - b.values()[k]));
  return s;
}

ConvergenceTable convergence_study(const SweepTemplate& tmpl, const std::vector<double>& eps_list,
                                   const SpaceTimeField& reference, unsigned jobs) {
  if (eps_list.empty()) throw ParameterError("convergence_study: empty eps list");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw ParameterError("convergence_study: eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
      throw ParameterError("convergence_study: eps values must be strictly decreasing");
  }
  if (reference.nx() != tmpl.space.size()) throw ShapeError("convergence_study: reference space grid mismatch");

  const std::size_t n = eps_list.size();
  std::vector<std::optional<SweepRun>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        WieProblem prob = tmpl.make(eps_list[k]);
        MinimizeResult res = minimize(prob, tmpl.options);
        SpaceTimeField w = rescale(res.u_eps, eps_list[k], reference.time_grid());
        const double l2 = space_time_l2(w, reference);
        const double sup = sup_distance(w, reference);
        slots[k].emplace(SweepRun{eps_list[k], std::move(prob), std::move(res), std::move(w), l2, sup});
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ConvergenceTable table;
  for (auto& s : slots) table.runs.push_back(std::move(*s));
  return table;
}

ConvergenceTable convergence_study(const SweepTemplate& tmpl, const std::vector<double>& eps_list,
                                   const OracleConfig& oracle, unsigned jobs) {
  if (oracle.space.size() != tmpl.space.size() || oracle.space.spacing() != tmpl.space.spacing())
    throw ShapeError("convergence_study: oracle and template space grids differ");
  return convergence_study(tmpl, eps_list, leapfrog_solve(oracle, tmpl.data), jobs);
}

std::string energy_csv(const EnergyReport& report) {
  std::ostringstream os;
  os << "t,K_eps,W,E_eps,margin_tt,margin_energy\n";
  for (std::size_t j = 0; j < report.times.size(); ++j) {
    os << fmt_num(report.times[j]) << ',' << fmt_num(report.kinetic[j]) << ',' << fmt_num(report.potential[j])
       << ',' << fmt_num(report.approx_energy[j]) << ',' << fmt_num(report.bound_margin[j]) << ','
       << fmt_num(report.inequality_margin[j]) << '\n';
  }
  return os.str();
}

}  // namespace wie
