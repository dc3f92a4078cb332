#include "wie/oracle.hpp"

#include <cmath>
#include <sstream>

#include "wie/errors.hpp"

namespace wie {

double OracleConfig::time_step() const {
  const double hx = space.spacing();
  const double dt = ht > 0.0 ? ht : 0.5 * hx;
  if (dt > cfl_limit * hx * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "oracle: time step " << dt << " violates CFL (limit " << cfl_limit * hx << ")";
    throw ConfigError(os.str());
  }
  if (!(T_phys > 0.0)) throw ConfigError("oracle: T_phys must be positive");
  return dt;
}

TimeGrid OracleConfig::time_grid() const {
  const double dt = time_step();
  const auto n = static_cast<std::size_t>(std::llround(std::ceil(T_phys / dt - 1e-9))) + 1;
  return TimeGrid::plain(static_cast<double>(n - 1) * dt, n);
}

namespace {

// a(t, w) = w_xx - |w|^{r-2} w [flag] + G(t, x, w)
void acceleration(const OracleConfig& cfg, const std::vector<double>& w, double t, std::vector<double>& a) {
  const std::size_t n = w.size();
  const double inv_h2 = 1.0 / (cfg.space.spacing() * cfg.space.spacing());
  const bool periodic = cfg.space.boundary() == Boundary::periodic;
  const bool forced = cfg.forcing.kind() != Forcing::Kind::zero;
  for (std::size_t i = 0; i < n; ++i) {
    if (!periodic && (i == 0 || i + 1 == n)) {
      a[i] = 0.0;
      continue;
    }
    const double left = i == 0 ? w[n - 1] : w[i - 1];
    const double right = i + 1 == n ? w[0] : w[i + 1];
    double v = (left - 2.0 * w[i] + right) * inv_h2;
    if (cfg.include_power_term) {
      const double x = w[i];
      const double ax = std::abs(x);
      v -= ax == 0.0 ? 0.0 : std::pow(ax, cfg.r - 2.0) * x;
    }
    if (forced) v += cfg.forcing.G(t, cfg.space.x(i), w[i]);
    a[i] = v;
  }
}

void check_bounded(const std::vector<double>& w, double t) {
  for (double v : w) {
    if (!(std::abs(v) <= 1e8)) {
      std::ostringstream os;
      os << "oracle: solution exceeded 1e8 at t = " << t;
      throw InstabilityError(os.str());
    }
  }
}

}  // namespace

std::vector<std::vector<double>> leapfrog_continue(const OracleConfig& cfg, std::vector<double> prev,
                                                   std::vector<double> cur, double t_cur, double ht,
                                                   std::size_t steps) {
  const std::size_t n = cur.size();
  if (prev.size() != n || n != cfg.space.size()) throw ShapeError("leapfrog: layer size mismatch");
  std::vector<std::vector<double>> out;
  out.reserve(steps);
  std::vector<double> a(n), next(n);
  double t = t_cur;
  for (std::size_t k = 0; k < steps; ++k) {
    acceleration(cfg, cur, t, a);
    for (std::size_t i = 0; i < n; ++i) next[i] = 2.0 * cur[i] - prev[i] + ht * ht * a[i];
    t += ht;
    check_bounded(next, t);
    prev.swap(cur);
    cur = next;
    out.push_back(cur);
  }
  return out;
}

SpaceTimeField leapfrog_solve(const OracleConfig& cfg, const InitialData& data) {
  if (data.w0.size() != cfg.space.size() || data.w1.size() != cfg.space.size())
    throw ShapeError("oracle: initial data do not match the space grid");
  const TimeGrid tg = cfg.time_grid();
  const double ht = tg.spacing();
  SpaceTimeField w(tg, cfg.space);
  const std::size_t n = cfg.space.size();

  std::vector<double> w0 = data.w0;
  std::vector<double> a(n), w1(n);
  acceleration(cfg, w0, 0.0, a);
  for (std::size_t i = 0; i < n; ++i) w1[i] = w0[i] + ht * data.w1[i] + 0.5 * ht * ht * a[i];
  if (cfg.space.boundary() == Boundary::dirichlet) {
    w1.front() = w0.front();
    w1.back() = w0.back();
  }
  check_bounded(w1, ht);
  for (std::size_t i = 0; i < n; ++i) {
    w(0, i) = w0[i];
    w(1, i) = w1[i];
  }
  const auto rest = leapfrog_continue(cfg, w0, w1, ht, ht, tg.size() - 2);
  for (std::size_t k = 0; k < rest.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) w(k + 2, i) = rest[k][i];
  return w;
}

std::vector<double> solution_energy(const SpaceTimeField& w, double r) {
  const std::size_t nt = w.nt();
  const std::size_t nx = w.nx();
  if (nt < 3) throw ShapeError("solution_energy: need at least 3 time nodes");
  const auto& sg = w.space_grid();
  const double ht = w.time_grid().spacing();
  const double hx = sg.spacing();
  const auto m = sg.weights();
  const bool periodic = sg.boundary() == Boundary::periodic;
  std::vector<double> E(nt, 0.0);
  for (std::size_t j = 0; j < nt; ++j) {
    double kin = 0.0, pot = 0.0, grad = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      double wt;
      if (j == 0)
        wt = (-3.0 * w(0, i) + 4.0 * w(1, i) - w(2, i)) / (2.0 * ht);
      else if (j + 1 == nt)
        wt = (3.0 * w(j, i) - 4.0 * w(j - 1, i) + w(j - 2, i)) / (2.0 * ht);
      else
        wt = (w(j + 1, i) - w(j - 1, i)) / (2.0 * ht);
      kin += m[i] * wt * wt;
      pot += m[i] * std::pow(std::abs(w(j, i)), r) / r;
      if (i + 1 < nx || periodic) {
        const double d = w(j, (i + 1) % nx) - w(j, i);
        grad += d * d / hx;
      }
    }
    E[j] = 0.5 * kin + 0.5 * grad + pot;
  }
  return E;
}

}  // namespace wie
