// Acceptance driver: `acceptance <c1..c9|all>` prints one PASS/FAIL line per
// criterion and exits nonzero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wie/admissibility.hpp"
#include "wie/config.hpp"
#include "wie/diagnostics.hpp"
#include "wie/io.hpp"

using namespace wie;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

fs::path preset(const std::string& name) { return fs::path(WIE_SOURCE_DIR) / "configs" / (name + ".json"); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + sci(v[k]);
  return s + "]";
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

// ---------------------------------------------------------------------------

Verdict gradient_consistency() {
  double worst = 0.0;
  int directions = 0;
  for (const char* name : {"zero", "bump_r4", "bump_r2_linear"}) {
    const ExperimentConfig cfg = ExperimentConfig::load(preset(name));
    const WieProblem p = cfg.problem_at(0.1);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> n(0.0, 1.0);
    SpaceTimeField u = affine_seed(p);
    for (std::size_t j = 0; j < u.nt(); ++j)
      for (std::size_t i = 0; i < u.nx(); ++i)
        if (p.is_free(j, i)) u(j, i) += 0.1 * n(rng);
    const SpaceTimeField grad = gradient_J(u, p);
    for (int k = 0; k < 20; ++k) {
      SpaceTimeField d(p.time, p.space);
      for (std::size_t j = 0; j < d.nt(); ++j)
        for (std::size_t i = 0; i < d.nx(); ++i)
          if (p.is_free(j, i)) d(j, i) = n(rng);
      const double tau = 1e-5;
      SpaceTimeField a(u), b(u);
      double dir = 0.0;
      for (std::size_t m = 0; m < u.values().size(); ++m) {
        a.values()[m] += tau * d.values()[m];
        b.values()[m] -= tau * d.values()[m];
        dir += grad.values()[m] * d.values()[m];
      }
      const double fd = (evaluate_J(a, p) - evaluate_J(b, p)) / (2.0 * tau);
      const double rel = std::abs(fd - dir) / std::max({std::abs(dir), std::abs(fd), 1e-300});
      worst = std::max(worst, rel);
      ++directions;
    }
  }
  return {worst <= 1e-5, "worst relative error " + sci(worst) + " over " + std::to_string(directions) +
                             " directions (limit 1e-05)"};
}

// ---------------------------------------------------------------------------

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

Verdict kernel_suite() {
  bool ok = true;
  std::ostringstream notes;
  const TimeFunction one{[](double) { return 1.0; }, GrowthEnvelope::bounded()};
  const double tail_tol = 1e-12;

  double norm_err = 0.0;
  for (double eps : {0.05, 0.1, 0.2, 0.3}) norm_err = std::max(norm_err, std::abs(mollify(one, eps, 0.5) - 1.0));
  ok = ok && norm_err <= 1e-8 + tail_tol;

  double moment_err = 0.0;
  for (double alpha : {0.0, 1.0, 2.0}) {
    const double scale = 0.3;
    const double exact = std::tgamma(alpha + 1.0) * std::pow(scale, alpha + 1.0);
    moment_err = std::max(moment_err, std::abs(laplace_moment(one, scale, alpha) - exact) / exact);
  }
  ok = ok && moment_err <= 1e-6;

  // step at t = 1: b_eps(s) = (1 + (1-s)/eps) e^{-(1-s)/eps} for s < 1, so the
  // L1(0,3) error is eps (2 - (2 + 1/eps) e^{-1/eps})
  const TimeFunction step{[](double t) { return t >= 1.0 ? 1.0 : 0.0; }, GrowthEnvelope::bounded()};
  std::vector<double> l1, closed;
  for (double eps : {0.2, 0.1, 0.05}) {
    auto err = [&](double s) { return std::abs(mollify(step, eps, s) - step(s)); };
    l1.push_back(simpson(err, 0.0, 1.0 - 1e-12, 800) + simpson(err, 1.0, 3.0, 800));
    closed.push_back(eps * (2.0 - (2.0 + 1.0 / eps) * std::exp(-1.0 / eps)));
  }
  double closed_err = 0.0;
  for (std::size_t k = 0; k < l1.size(); ++k) closed_err = std::max(closed_err, std::abs(l1[k] - closed[k]) / closed[k]);
  ok = ok && strictly_decreasing(l1) && closed_err <= 1e-3;

  const SpaceGrid g = SpaceGrid::make(2.5, 201, Boundary::dirichlet);
  const auto h = SpatialProfile::gaussian(1.0, 0.5);
  const std::vector<Forcing> catalog{Forcing::linear(TimeFactor::constant(1.0), h),
                                     Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), h),
                                     Forcing::linear(TimeFactor::polynomial({1.0, 0.5}), h)};
  const double eps_F = 0.45, T = 2.0, eps = 0.1;
  int q_viol = 0;
  for (const auto& f : catalog) {
    const TimeFunction fn = f.f_norm(g);
    const double M = m_f(fn, eps_F, T);
    for (int k = 0; k < 100; ++k)
      if (!(q_eps(fn, eps, T * k / 99.0) <= M)) ++q_viol;
  }
  ok = ok && q_viol == 0;

  notes << "normalization err " << sci(norm_err) << ", moment rel err " << sci(moment_err) << ", step L1 "
        << list(l1) << " (closed-form rel err " << sci(closed_err) << "), Q_eps > M_F at " << q_viol << "/300 points";
  return {ok, notes.str()};
}

// ---------------------------------------------------------------------------

struct Sweep {
  std::string name;
  ConvergenceTable table;
  double r = 2.0;
  TimeFunction f_norm;
};

Sweep ode_sweep() {
  const ExperimentConfig cfg = ExperimentConfig::load(preset("ode"));
  const SweepTemplate tmpl = cfg.sweep_template();
  const double T = cfg.problem.T_phys;
  const auto n = static_cast<std::size_t>(std::ceil(T / 0.01)) + 1;
  SpaceTimeField ref(TimeGrid::plain(T, n), tmpl.space);
  for (std::size_t j = 0; j < ref.nt(); ++j)
    for (std::size_t i = 0; i < ref.nx(); ++i) ref(j, i) = std::cos(ref.time_grid().t(j));
  return {"ode", convergence_study(tmpl, cfg.problem.eps_list, ref, 3), cfg.problem.r,
          tmpl.forcing.f_norm(tmpl.space)};
}

Sweep pde_sweep(const std::string& name) {
  const ExperimentConfig cfg = ExperimentConfig::load(preset(name));
  const SweepTemplate tmpl = cfg.sweep_template();
  return {name, convergence_study(tmpl, cfg.problem.eps_list, cfg.oracle_config(tmpl.space), 3), cfg.problem.r,
          tmpl.forcing.f_norm(tmpl.space)};
}

Verdict ode_reduction() {
  const Sweep s = ode_sweep();
  std::vector<double> sup;
  for (const auto& run : s.table.runs) sup.push_back(run.sup_error);
  const bool ok = sup.back() <= 0.15 && strictly_decreasing(sup);
  return {ok, "sup errors " + list(sup) + " for eps {0.2, 0.1, 0.05}; need last <= 0.15 and strictly decreasing"};
}

Verdict pde_convergence() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"bump_r4", "bump_r4_forced"}) {
    const Sweep s = pde_sweep(name);
    const auto l2 = s.table.l2_errors();
    const double ratio = l2.back() / l2.front();
    const bool this_ok = strictly_decreasing(l2) && ratio <= 0.5;
    ok = ok && this_ok;
    detail += std::string(detail.empty() ? "" : "; ") + name + " L2 " + list(l2) + " ratio " + sci(ratio);
  }
  return {ok, detail};
}

Verdict energy_inequality() {
  std::vector<Sweep> sweeps;
  sweeps.push_back(ode_sweep());
  sweeps.push_back(pde_sweep("bump_r4"));
  sweeps.push_back(pde_sweep("bump_r4_forced"));
  bool ok = true;
  int checked = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : sweeps)
    for (const auto& run : s.table.runs) {
      if (!run.result.converged) continue;
      const EnergyInequality ei = check_energy_inequality(run.w, s.f_norm, s.r, 0.02);
      const double scaled = ei.min_margin / ei.E0;
      worst = std::min(worst, scaled);
      ok = ok && ei.min_margin >= -0.02 * ei.E0;
      ++checked;
    }
  ok = ok && checked > 0;
  return {ok, "worst min margin / E(0) = " + sci(worst) + " over " + std::to_string(checked) +
                  " converged runs (limit -2.000e-02)"};
}

// ---------------------------------------------------------------------------

Verdict a_priori_bounds() {
  bool ok = true;
  double worst_energy = 0.0, worst_tt = std::numeric_limits<double>::infinity();
  int elementary_fail = 0, runs = 0;
  for (const char* name : {"bump_r4", "bump_r4_forced"}) {
    const ExperimentConfig cfg = ExperimentConfig::load(preset(name));
    for (double eps : cfg.problem.eps_list) {
      const WieProblem p = cfg.problem_at(eps);
      const MinimizeResult res = minimize(p, cfg.minimize_options());
      const EnergyReport rep = check_appendix_bound(res.u_eps, p, p.forcing.f_norm(p.space), 0.02);
      worst_energy = std::max(worst_energy, res.weighted_energy / res.energy_bound);
      const double scale = std::max(rep.constants.Q, 1e-300);
      worst_tt = std::min(worst_tt, rep.min_bound_margin / scale);
      const bool elem = elementary_estimates(res.u_eps, p).hold(0.05);
      if (!elem) ++elementary_fail;
      ok = ok && res.converged && res.weighted_energy <= res.energy_bound && rep.bound_ok && elem;
      ++runs;
    }
  }
  return {ok, "max weighted energy / C-bar " + sci(worst_energy) + ", min (tt) margin / Q " + sci(worst_tt) +
                  ", elementary failures " + std::to_string(elementary_fail) + "/" + std::to_string(runs)};
}

Verdict vanishing_energy() {
  ExperimentConfig cfg = ExperimentConfig::load(preset("bump_r4"));
  cfg.problem.w1 = ProfileSpec{};
  cfg.forcing.kind = "zero";
  const WieProblem p = cfg.problem_at(0.05);
  const MinimizeResult res = minimize(p, cfg.minimize_options());
  const double moment = first_moment_W(res.u_eps, p);
  const double W0 = potential_W(p.data.w0, p.r, p.space, p.power_reg);
  const bool ok = res.converged && moment <= 1.1 * W0;
  return {ok, "int s e^{-s} W(u) ds = " + sci(moment) + ", 1.1 W(w0) = " + sci(1.1 * W0)};
}

// ---------------------------------------------------------------------------

Verdict sharpness() {
  const ExperimentConfig cfg = ExperimentConfig::load(preset("sharpness"));
  const SpaceGrid g = cfg.space_grid();
  const TimeFactor eta = cfg.sharpness.eta.build();
  const SpatialProfile prof = cfg.sharpness.g.build();
  const SharpnessResult res = sharpness_demo(eta, prof, cfg.initial_data(g), g, cfg.sharpness.eps, 40, cfg.problem.r);

  std::size_t tail = 0;
  int first_below = -1;
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    if (k > 0 && !(res.rows[k].F_value < res.rows[k - 1].F_value)) tail = k;
    if (first_below < 0 && res.rows[k].F_value < -1e6) first_below = res.rows[k].n;
  }
  const bool decreasing_tail = res.rows.size() >= 2 && tail + 1 < res.rows.size();
  const bool dropped = first_below >= 0 && first_below <= 40;

  const auto h = SpatialProfile::gaussian(1.0, 0.5);
  const std::vector<double> windows = cfg.admissibility.windows;
  const double eps_F = cfg.admissibility.eps_F;
  const bool rejected = !check_hypotheses(Forcing::linear(eta, prof), eps_F, windows, g).admissible();
  const std::vector<Forcing> admissible{
      Forcing::linear(TimeFactor::constant(1.0), h), Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), h),
      Forcing::linear(TimeFactor::polynomial({1.0, 0.5}), h),
      Forcing::separable(TimeFactor::constant(1.0), SpatialProfile::bump(1.0, 1.0), Psi::sine_gordon)};
  int accepted = 0;
  for (const auto& f : admissible)
    if (check_hypotheses(f, eps_F, windows, g).admissible()) ++accepted;

  std::vector<double> values;
  for (const auto& row : res.rows) values.push_back(row.F_value);
  const bool ok = decreasing_tail && dropped && rejected && accepted == 4;
  return {ok, "F_eps(w_n) " + list(values) + (res.overflowed ? " (stopped at double overflow)" : "") +
                  ", strictly decreasing from n=" + (res.rows.empty() ? std::string("-") : std::to_string(res.rows[tail].n)) +
                  ", first n below -1e6: " + std::to_string(first_below) + ", e^{t^2} rejected: " +
                  (rejected ? "yes" : "no") + ", admissible catalog accepted " + std::to_string(accepted) + "/4"};
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return files;
}

Verdict determinism() {
  const fs::path root = fs::path(WIE_BINARY_DIR) / "acceptance_out" / "determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  ExperimentConfig seeded = ExperimentConfig::load(preset("smoke"));
  seeded.minimizer.seed_kind = "random";
  seeded.seed = 7;
  const fs::path seeded_path = root / "smoke_random.json";
  write_atomic(seeded_path, seeded.to_json_text());

  const std::vector<std::pair<std::string, fs::path>> jobs{
      {"kernels-test", {}},
      {"minimize", preset("smoke")},
      {"minimize", seeded_path},
      {"converge", preset("ode")},
      {"converge", preset("bump_r4")},
      {"converge", preset("bump_r4_forced")},
      {"oracle", preset("traveling_wave")},
      {"admissible", preset("bump_r4_forced")},
      {"sharpness", preset("sharpness")}};

  int compared = 0, mismatched = 0;
  std::string bad;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const auto& [sub, config] = jobs[k];
    const fs::path out = root / ("run" + std::to_string(k));
    std::string cmd = std::string("\"") + WIE_CLI_PATH + "\" " + sub;
    if (!config.empty()) cmd += " --config \"" + config.string() + "\"";
    cmd += " --seed 7 --out \"" + out.string() + "\" > /dev/null 2>&1";

    std::map<std::string, std::string> first;
    for (int pass = 0; pass < 2; ++pass) {
      fs::remove_all(out);
      const int rc = std::system(cmd.c_str());
      if (rc == -1 || !fs::exists(out)) {
        ++mismatched;
        bad += " " + sub + "(no output)";
        break;
      }
      if (pass == 0) {
        first = snapshot(out);
        continue;
      }
      const auto second = snapshot(out);
      if (first.size() != second.size()) {
        ++mismatched;
        bad += " " + sub + "(file set)";
      }
      for (const auto& [name, content] : first) {
        ++compared;
        const auto it = second.find(name);
        if (it == second.end() || it->second != content) {
          ++mismatched;
          bad += " " + sub + ":" + name;
        }
      }
    }
  }
  return {mismatched == 0 && compared > 0, std::to_string(compared) + " files compared across " +
                                               std::to_string(jobs.size()) + " runs, " +
                                               std::to_string(mismatched) + " mismatches" + bad};
}

// ---------------------------------------------------------------------------

struct Criterion {
  std::string id;
  std::string title;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"c1", "gradient consistency", gradient_consistency},
      {"c2", "kernel identities", kernel_suite},
      {"c3", "ODE reduction", ode_reduction},
      {"c4", "PDE convergence", pde_convergence},
      {"c5", "energy inequality", energy_inequality},
      {"c6", "a-priori bounds", a_priori_bounds},
      {"c7", "vanishing-eps energy", vanishing_energy},
      {"c8", "sharpness", sharpness},
      {"c9", "determinism", determinism}};
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  int failures = 0, ran = 0;
  for (const auto& c : criteria()) {
    if (which != "all" && which != c.id) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), v.detail.c_str(),
                secs);
    if (!v.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "usage: acceptance <c1..c9|all>\n");
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
