#include "wie/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wie/errors.hpp"
#include "wie/functional.hpp"
#include "wie/io.hpp"

namespace wie {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string AdmissibilityReport::json() const {
  nlohmann::json j;
  j["eps_F"] = num(eps_F);
  nlohmann::json wins = nlohmann::json::array();
  for (const auto& w : windows) wins.push_back({{"T", num(w.T)}, {"sup_f_L2", num(w.sup)}});
  j["hyp0"] = {{"ok", hyp0_ok}, {"windows", wins}};
  nlohmann::json mesh = nlohmann::json::array();
  for (double e : C_F_eps_mesh) mesh.push_back(num(e));
  j["hyp1"] = {{"ok", hyp1_ok}, {"C_F", num(C_F)}, {"eps_mesh", mesh}};
  j["laplace"] = {{"ok", laplace_ok}, {"K_F", num(K_F)}, {"M_F", num(M_F)}, {"envelope", envelope}};
  j["eps_F_estimate"] = {{"value", num(eps_F_estimate)}, {"heuristic", true}};
  j["admissible"] = admissible();
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

AdmissibilityReport check_hypotheses(const Forcing& forcing, double eps_F, const std::vector<double>& windows,
                                     const SpaceGrid& grid, std::size_t sup_mesh) {
  if (!(eps_F > 0.0 && eps_F < 0.5)) throw ParameterError("check_hypotheses: eps_F must lie in (0, 1/2)");
  if (windows.empty()) throw ParameterError("check_hypotheses: at least one window is required");
  for (double T : windows)
    if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("check_hypotheses: windows must be positive");
  const auto env = forcing.f_norm_envelope();
  if (!env) throw InputError("check_hypotheses: forcing has no declared growth envelope");
  const TimeFunction fn = forcing.f_norm(grid);

  AdmissibilityReport rep;
  rep.eps_F = eps_F;
  rep.envelope = env->describe();

  for (double T : windows) {
    double s = sampled_sup([&](double t) { return std::sqrt(std::max(0.0, fn(t))); }, 0.0, T, sup_mesh);
    if (!std::isfinite(s)) {
      rep.hyp0_ok = false;
      s = inf;
    }
    rep.windows.push_back({T, s});
  }
  if (!rep.hyp0_ok) rep.notes.push_back("hyp0: ||f(t)|| is not finite on some window");

  try {
    const auto cf = estimate_C_F(forcing, grid, eps_F);
    rep.C_F = cf.value;
    rep.C_F_eps_mesh = cf.eps_mesh;
    rep.hyp1_ok = finite_nonneg(cf.value);
    if (cf.exact) rep.notes.push_back("hyp1: F(t,x,0) vanishes identically, C_F = 0");
  } catch (const Error& e) {
    rep.hyp1_ok = false;
    rep.C_F = inf;
    rep.notes.push_back(std::string("hyp1: ") + e.what());
  }
  if (!rep.hyp1_ok && rep.notes.empty()) rep.notes.push_back("hyp1: C_F estimate is not finite");

  rep.laplace_ok = env->integrable_against(2.0 * eps_F);
  if (rep.laplace_ok) {
    try {
      rep.K_F = laplace_moment(fn, 2.0 * eps_F, 0.0) / eps_F;
      const double T_max = *std::max_element(windows.begin(), windows.end());
      rep.M_F = m_f(fn, eps_F, T_max, KernelOptions{0.0, sup_mesh});
      if (!finite_nonneg(rep.K_F) || !finite_nonneg(rep.M_F)) {
        rep.laplace_ok = false;
        rep.notes.push_back("laplace: quadrature of the weighted forcing norm is not finite");
      }
    } catch (const Error& e) {
      rep.laplace_ok = false;
      rep.notes.push_back(std::string("laplace: ") + e.what());
    }
  } else {
    rep.notes.push_back("laplace: envelope " + rep.envelope + " is not integrable against e^{-t/(2 eps_F)}");
  }
  if (!rep.laplace_ok) {
    rep.K_F = inf;
    rep.M_F = inf;
  }

  // largest candidate on a fixed mesh for which the weighted norm stays finite
  for (double e : {0.49, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.025, 0.01}) {
    if (!env->integrable_against(2.0 * e)) continue;
    double k = inf;
    try {
      k = laplace_moment(fn, 2.0 * e, 0.0);
    } catch (const Error&) {
      continue;
    }
    if (std::isfinite(k)) {
      rep.eps_F_estimate = e;
      break;
    }
  }
  rep.notes.push_back("eps_F_estimate: largest value of a fixed mesh in (0, 1/2) with a finite weighted norm (heuristic)");
  return rep;
}

double zeta(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 5.0) return 0.0;
  const double y = (t - 1.0) / 4.0;
  return 1.0 - y * y * y * (10.0 - 15.0 * y + 6.0 * y * y);
}

double zeta_d1(double t) {
  if (t <= 1.0 || t >= 5.0) return 0.0;
  const double y = (t - 1.0) / 4.0;
  return -30.0 * y * y * (1.0 - y) * (1.0 - y) / 4.0;
}

double zeta_d2(double t) {
  if (t <= 1.0 || t >= 5.0) return 0.0;
  const double y = (t - 1.0) / 4.0;
  return -60.0 * y * (1.0 - y) * (1.0 - 2.0 * y) / 16.0;
}

double zeta_derivative_bound(std::size_t mesh) {
  return sampled_sup([](double t) { return std::abs(zeta_d1(t)) + std::abs(zeta_d2(t)); }, 0.0, 6.0, mesh);
}

std::string SharpnessResult::csv() const {
  std::ostringstream os;
  os << "n,F_eps,inertia,potential,forcing\n";
  for (const auto& row : rows)
    os << row.n << ',' << fmt_num(row.F_value) << ',' << fmt_num(row.inertia) << ',' << fmt_num(row.potential)
       << ',' << fmt_num(row.forcing) << '\n';
  return os.str();
}

std::string SharpnessResult::dat() const {
  std::ostringstream os;
  for (const auto& row : rows) os << row.n << ' ' << fmt_num(row.F_value) << '\n';
  return os.str();
}

SharpnessResult sharpness_demo(const TimeFactor& eta, const SpatialProfile& g, const InitialData& data,
                               const SpaceGrid& grid, double eps, int n_max, double r) {
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("sharpness_demo: eps must lie in (0, 1/2)");
  if (n_max < 0) throw ParameterError("sharpness_demo: n_max must be non-negative");
  if (!(r > 1.0)) throw ParameterError("sharpness_demo: r must exceed 1");
  const std::size_t nx = grid.size();
  if (data.w0.size() != nx || data.w1.size() != nx) throw ShapeError("sharpness_demo: data do not match grid");
  const auto gs = g.sample(grid);
  const auto m = grid.weights();
  double pairing = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    if (gs[i] < 0.0) throw InputError("sharpness_demo: spatial profile g must be non-negative");
    if (data.w1[i] < 0.0) throw InputError("sharpness_demo: w1 must be non-negative");
    pairing += m[i] * gs[i] * data.w0[i];
  }
  if (!(pairing > 0.0)) throw InputError("sharpness_demo: int g w0 dx must be positive");

  SharpnessResult out;
  std::vector<double> v(nx);
  for (int n = 0; n <= n_max; ++n) {
    const double scale = std::ldexp(1.0, n);
    const double S = 5.0 * scale;
    auto profile = [&](double t) {
      const double z = zeta(t / scale);
      for (std::size_t i = 0; i < nx; ++i) v[i] = (data.w0[i] + t * data.w1[i]) * z;
    };
    auto inertia = [&](double t) {
      const double z1 = zeta_d1(t / scale) / scale;
      const double z2 = zeta_d2(t / scale) / (scale * scale);
      double acc = 0.0;
      for (std::size_t i = 0; i < nx; ++i) {
        const double a = (data.w0[i] + t * data.w1[i]) * z2 + 2.0 * data.w1[i] * z1;
        acc += m[i] * a * a;
      }
      return std::exp(-t / eps) * 0.5 * eps * eps * acc;
    };
    auto potential = [&](double t) {
      const double w = std::exp(-t / eps);
      if (w == 0.0) return 0.0;
      profile(t);
      return w * potential_W(v, r, grid);
    };
    auto forcing = [&](double t) {
      const double z = zeta(t / scale);
      if (z == 0.0) return 0.0;
      const double e = eta(t);
      if (e == 0.0) return 0.0;
      double acc = 0.0;
      for (std::size_t i = 0; i < nx; ++i) acc += m[i] * gs[i] * (data.w0[i] + t * data.w1[i]);
      return std::exp(-t / eps) * e * z * acc;
    };

    std::vector<double> pts{0.0};
    for (double t = eps; t < S; t *= 2.0) pts.push_back(t);
    pts.push_back(scale);
    pts.push_back(S);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    SharpnessRow row;
    row.n = n;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      row.inertia += integrate(inertia, pts[k], pts[k + 1], 1e-10);
      row.potential += integrate(potential, pts[k], pts[k + 1], 1e-10);
      row.forcing += integrate(forcing, pts[k], pts[k + 1], 1e-10);
    }
    row.F_value = row.inertia + row.potential - row.forcing;
    if (!std::isfinite(row.F_value) || !std::isfinite(row.forcing)) {
      out.overflowed = true;
      break;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace wie
