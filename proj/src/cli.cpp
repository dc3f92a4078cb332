#include "wie/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wie/admissibility.hpp"
#include "wie/diagnostics.hpp"
#include "wie/errors.hpp"
#include "wie/io.hpp"
#include "wie/kernels.hpp"

namespace wie {

namespace {

using Json = nlohmann::ordered_json;

Json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

// Collects artifacts and writes them in a fixed order once the run is done.
class Artifacts {
 public:
  Artifacts(const ExperimentConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log), dir_(cfg.outputs.directory) {}

  void add(const std::string& name, const std::string& format, std::string content) {
    if (cfg_.outputs.wants(format)) files_.emplace_back(name, std::move(content));
  }

  void flush() {
    write_atomic(dir_ / "resolved_config.json", cfg_.to_json_text());
    for (const auto& [name, content] : files_) write_atomic(dir_ / name, content);
    log_ << "wrote " << files_.size() + 1 << " files to " << dir_.string() << "\n";
  }

 private:
  const ExperimentConfig& cfg_;
  std::ostream& log_;
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

TimeGrid physical_grid(double T, double ht) {
  const auto n = static_cast<std::size_t>(std::llround(std::ceil(T / ht - 1e-9))) + 1;
  return TimeGrid::plain(T, std::max<std::size_t>(n, 3));
}

// Composite Simpson with n (even) panels. The mollified step carries
// quadrature noise that defeats an adaptive outer rule.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool is_space_constant(const ProfileSpec& p) { return p.kind == "zero" || p.kind == "constant"; }

SpaceTimeField closed_form_reference(const ExperimentConfig& cfg, const SpaceGrid& grid) {
  const auto& p = cfg.problem;
  if (!(p.r == 2.0) || cfg.forcing.kind != "zero" || !is_space_constant(p.w0) || !is_space_constant(p.w1))
    throw ConfigError("oracle.reference closed_form needs r = 2, zero forcing and space-constant data");
  const double a = p.w0.kind == "constant" ? p.w0.value : 0.0;
  const double b = p.w1.kind == "constant" ? p.w1.value : 0.0;
  SpaceTimeField w(physical_grid(p.T_phys, cfg.oracle.reference_ht), grid);
  for (std::size_t j = 0; j < w.nt(); ++j) {
    const double t = w.time_grid().t(j);
    for (std::size_t i = 0; i < w.nx(); ++i) w(j, i) = a * std::cos(t) + b * std::sin(t);
  }
  return w;
}

SpaceTimeField dalembert_reference(const ExperimentConfig& cfg, const SpaceGrid& grid, const TimeGrid& tg) {
  if (cfg.oracle.include_power_term || cfg.forcing.kind != "zero")
    throw ConfigError("oracle.reference dalembert needs include_power_term = false and zero forcing");
  const SpatialProfile w0 = cfg.problem.w0.build();
  const SpatialProfile w1 = cfg.problem.w1.build();
  SpaceTimeField w(tg, grid);
  for (std::size_t j = 0; j < w.nt(); ++j) {
    const double t = tg.t(j);
    for (std::size_t i = 0; i < w.nx(); ++i) {
      const double x = grid.x(i);
      double v = 0.5 * (w0(x - t) + w0(x + t));
      if (w1.kind() != SpatialProfile::Kind::zero && t > 0.0)
        v += 0.5 * integrate([&](double y) { return w1(y); }, x - t, x + t, 1e-12);
      w(j, i) = v;
    }
  }
  return w;
}

SpaceGrid refined(const SpaceGrid& g) {
  const std::size_t n = g.boundary() == Boundary::dirichlet ? 2 * g.size() - 1 : 2 * g.size();
  return SpaceGrid::make(g.half_length(), n, g.boundary());
}

int run_minimize(const ExperimentConfig& cfg, std::ostream& log) {
  const double eps = cfg.problem.eps;
  const WieProblem prob = cfg.problem_at(eps);
  const MinimizeResult res = minimize(prob, cfg.minimize_options());
  const auto& d = cfg.diagnostics;
  const TimeFunction fn = prob.forcing.f_norm(prob.space);

  const EnergyReport er = check_appendix_bound(res.u_eps, prob, fn, d.slack, d.tail_tol, d.safety_factor);
  const ElementaryEstimates ee = elementary_estimates(res.u_eps, prob);
  const LowerBoundCheck lb = lower_bound_chain(res.u_eps, prob, res.constants.C_F, res.constants.K_star);
  const double moment = first_moment_W(res.u_eps, prob);
  const double W0 = potential_W(prob.data.w0, prob.r, prob.space, prob.power_reg);
  const bool moment_check_applies = prob.forcing.kind() == Forcing::Kind::zero &&
                                l2_norm_squared(prob.data.w1, prob.space) == 0.0;

  Json summary;
  summary["eps"] = eps;
  summary["converged"] = res.converged;
  summary["status"] = res.status;
  summary["iterations"] = res.iterations;
  summary["evaluations"] = res.evaluations;
  summary["grad_norm"] = num(res.grad_norm);
  summary["grad_tol"] = cfg.minimizer.grad_tol;
  summary["J"] = num(res.J_value);
  summary["J_seed"] = num(res.J_seed);
  summary["parts"] = {{"inertia", num(res.parts.inertia)},
                      {"potential", num(res.parts.potential)},
                      {"forcing", num(res.parts.forcing)}};
  summary["weighted_energy"] = num(res.weighted_energy);
  summary["energy_bound"] = {{"C_bar", num(res.energy_bound)},
                             {"holds", res.weighted_energy <= res.energy_bound},
                             {"C_F", num(res.constants.C_F)},
                             {"K_star", num(res.constants.K_star)}};
  summary["lower_bound_chain"] = {{"J", num(lb.J)},
                                  {"bound", num(lb.bound)},
                                  {"phi_abs", num(lb.phi_abs)},
                                  {"phi_bound", num(lb.phi_bound)},
                                  {"holds", lb.holds()}};
  summary["elementary_estimates"] = {{"u", {num(ee.lhs_u), num(ee.rhs_u)}},
                                     {"u_t", {num(ee.lhs_ut), num(ee.rhs_ut)}},
                                     {"prime", {num(ee.lhs_prime), num(ee.rhs_prime)}},
                                     {"second", {num(ee.lhs_second), num(ee.rhs_second)}},
                                     {"hold_5pct", ee.hold(0.05)}};
  summary["approximate_energy"] = {{"B_bar", num(er.constants.B_bar)},
                                   {"Q", num(er.constants.Q)},
                                   {"Q_bar", num(er.constants.Q_bar)},
                                   {"safety_factor", er.constants.safety_factor},
                                   {"nodes", er.times.size()},
                                   {"min_bound_margin", num(er.min_bound_margin)},
                                   {"bound_ok", er.bound_ok},
                                   {"lower_ok", er.lower_ok},
                                   {"min_inequality_margin", num(er.min_inequality_margin)}};
  if (d.test_hi < prob.time.horizon()) {
    const Lemma1Estimates l1 = check_lemma1_estimates(res.u_eps, prob, TestFunction::bump(d.test_lo, d.test_hi), fn,
                                                      er.constants.Q_bar, d.slack);
    Json rows = Json::array();
    for (int k = 0; k < 3; ++k)
      rows.push_back({{"lhs", num(l1.lhs[k])}, {"rhs", num(l1.rhs[k])}, {"holds", l1.holds[k]}});
    summary["xi_estimates"] = rows;
  }
  summary["first_moment_W"] = {{"value", num(moment)},
                               {"W0", num(W0)},
                               {"factor", d.moment_factor},
                               {"applicable", moment_check_applies},
                               {"holds", moment <= d.moment_factor * W0}};

  const SpaceTimeField w = rescale(res.u_eps, eps, physical_grid(cfg.problem.T_phys, cfg.oracle.reference_ht));
  const EnergyInequality ei = check_energy_inequality(w, fn, prob.r, d.energy_rel_tol);
  summary["energy_inequality"] = {{"E0", num(ei.E0)},
                                  {"min_margin", num(ei.min_margin)},
                                  {"tolerance", num(ei.tolerance)},
                                  {"passed", ei.passed}};

  std::ostringstream sol;
  sol << "t,x,w\n";
  for (std::size_t j = 0; j < w.nt(); ++j)
    for (std::size_t i = 0; i < w.nx(); ++i)
      sol << fmt_num(w.time_grid().t(j)) << ',' << fmt_num(w.space_grid().x(i)) << ',' << fmt_num(w(j, i)) << '\n';
  std::ostringstream hist;
  for (std::size_t k = 0; k < res.history.size(); ++k) hist << k << ' ' << fmt_num(res.history[k]) << '\n';

  Artifacts out(cfg, log);
  out.add("minimize.json", "json", summary.dump(2) + "\n");
  out.add("energy.csv", "csv", energy_csv(er));
  out.add("solution.csv", "csv", sol.str());
  out.add("history.dat", "dat", hist.str());
  out.flush();

  log << "minimize eps=" << eps << " converged=" << (res.converged ? "yes" : "no") << " iterations="
      << res.iterations << " grad_norm=" << res.grad_norm << " J=" << res.J_value << "\n";
  return res.converged ? exit_ok : exit_numerical;
}

int run_converge(const ExperimentConfig& cfg, std::ostream& log) {
  const SweepTemplate tmpl = cfg.sweep_template();
  const auto& eps_list = cfg.problem.eps_list;
  ConvergenceTable table;
  if (cfg.oracle.reference == "closed_form") {
    table = convergence_study(tmpl, eps_list, closed_form_reference(cfg, tmpl.space), cfg.jobs);
  } else if (cfg.oracle.reference == "leapfrog") {
    table = convergence_study(tmpl, eps_list, cfg.oracle_config(tmpl.space), cfg.jobs);
  } else {
    throw ConfigError("converge: oracle.reference must be leapfrog or closed_form");
  }
  const TimeFunction fn = tmpl.forcing.f_norm(tmpl.space);

  Json runs = Json::array();
  std::ostringstream dat;
  bool all_converged = true, all_energy = true;
  for (const auto& run : table.runs) {
    const EnergyInequality ei = check_energy_inequality(run.w, fn, tmpl.r, cfg.diagnostics.energy_rel_tol);
    all_converged = all_converged && run.result.converged;
    all_energy = all_energy && ei.passed;
    runs.push_back({{"eps", run.eps},
                    {"l2_error", num(run.l2_error)},
                    {"sup_error", num(run.sup_error)},
                    {"converged", run.result.converged},
                    {"iterations", run.result.iterations},
                    {"grad_norm", num(run.result.grad_norm)},
                    {"energy_min_margin", num(ei.min_margin)},
                    {"energy_tolerance", num(ei.tolerance)},
                    {"energy_inequality", ei.passed}});
    dat << fmt_num(run.eps) << ' ' << fmt_num(run.l2_error) << '\n';
  }
  const auto errs = table.l2_errors();
  const double ratio = errs.front() > 0.0 ? errs.back() / errs.front() : 0.0;
  Json summary;
  summary["reference"] = cfg.oracle.reference;
  summary["runs"] = runs;
  summary["strictly_decreasing"] = table.strictly_decreasing();
  summary["ratio_smallest_to_largest"] = num(ratio);
  summary["all_converged"] = all_converged;
  summary["energy_inequality_all"] = all_energy;

  Artifacts out(cfg, log);
  out.add("convergence.csv", "csv", table.csv());
  out.add("convergence.json", "json", summary.dump(2) + "\n");
  out.add("convergence.dat", "dat", dat.str());
  out.flush();

  for (const auto& run : table.runs)
    log << "eps=" << run.eps << " l2_error=" << run.l2_error << " sup_error=" << run.sup_error << "\n";
  log << "strictly decreasing: " << (table.strictly_decreasing() ? "yes" : "no") << "\n";
  return all_converged ? exit_ok : exit_numerical;
}

int run_oracle(const ExperimentConfig& cfg, std::ostream& log) {
  const SpaceGrid grid = cfg.space_grid();
  const OracleConfig oc = cfg.oracle_config(grid);
  const SpaceTimeField w = leapfrog_solve(oc, cfg.initial_data(grid));

  Json summary;
  summary["T_phys"] = cfg.problem.T_phys;
  summary["hx"] = grid.spacing();
  summary["ht"] = w.time_grid().spacing();
  summary["nt"] = w.nt();
  summary["include_power_term"] = oc.include_power_term;

  std::ostringstream csv, dat;
  csv << "t,E\n";
  const auto E = solution_energy(w, oc.r);
  for (std::size_t j = 0; j < w.nt(); ++j) {
    csv << fmt_num(w.time_grid().t(j)) << ',' << fmt_num(E[j]) << '\n';
    dat << fmt_num(w.time_grid().t(j)) << ' ' << fmt_num(E[j]) << '\n';
  }
  if (oc.include_power_term) {
    const EnergyInequality ei =
        check_energy_inequality(w, oc.forcing.f_norm(grid), oc.r, cfg.diagnostics.energy_rel_tol);
    summary["energy_inequality"] = {{"E0", num(ei.E0)}, {"min_margin", num(ei.min_margin)}, {"passed", ei.passed}};
  }
  if (cfg.oracle.reference == "dalembert") {
    const double e1 = sup_distance(w, dalembert_reference(cfg, grid, w.time_grid()));
    const SpaceGrid fine = refined(grid);
    OracleConfig oc2 = cfg.oracle_config(fine);
    if (oc2.ht > 0.0) oc2.ht *= 0.5;
    const SpaceTimeField w2 = leapfrog_solve(oc2, cfg.initial_data(fine));
    const double e2 = sup_distance(w2, dalembert_reference(cfg, fine, w2.time_grid()));
    const double h = grid.spacing();
    summary["exact"] = {{"sup_error", num(e1)},
                        {"C_estimate", num(e1 / (h * h))},
                        {"refined_sup_error", num(e2)},
                        {"refined_hx", fine.spacing()},
                        {"observed_order", num(std::log2(e1 / e2))}};
    log << "oracle sup error " << e1 << " (h=" << h << ", C=" << e1 / (h * h) << "), refined " << e2 << "\n";
  }

  Artifacts out(cfg, log);
  out.add("oracle_energy.csv", "csv", csv.str());
  out.add("oracle_energy.dat", "dat", dat.str());
  out.add("oracle.json", "json", summary.dump(2) + "\n");
  out.flush();
  return exit_ok;
}

int run_admissible(const ExperimentConfig& cfg, std::ostream& log) {
  const auto& a = cfg.admissibility;
  const AdmissibilityReport rep = check_hypotheses(cfg.build_forcing(), a.eps_F, a.windows, cfg.space_grid(), a.sup_mesh);
  Artifacts out(cfg, log);
  out.add("admissibility.json", "json", rep.json());
  out.flush();
  log << "hyp0=" << rep.hyp0_ok << " hyp1=" << rep.hyp1_ok << " laplace=" << rep.laplace_ok
      << " admissible=" << rep.admissible() << "\n";
  return exit_ok;
}

int run_sharpness(const ExperimentConfig& cfg, std::ostream& log) {
  const auto& s = cfg.sharpness;
  const SpaceGrid grid = cfg.space_grid();
  const TimeFactor eta = s.eta.build();
  const SpatialProfile g = s.g.build();
  const SharpnessResult res = sharpness_demo(eta, g, cfg.initial_data(grid), grid, s.eps, s.n_max, cfg.problem.r);
  const AdmissibilityReport rep =
      check_hypotheses(Forcing::linear(eta, g), cfg.admissibility.eps_F, cfg.admissibility.windows, grid,
                       cfg.admissibility.sup_mesh);

  bool monotone = true;
  int first_below = -1;
  std::size_t tail_start = 0;
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    if (k > 0 && res.rows[k].forcing < res.rows[k - 1].forcing) monotone = false;
    if (k > 0 && !(res.rows[k].F_value < res.rows[k - 1].F_value)) tail_start = k;
    if (first_below < 0 && res.rows[k].F_value < -1e6) first_below = res.rows[k].n;
  }
  Json summary;
  summary["eps"] = s.eps;
  summary["rows"] = res.rows.size();
  summary["overflowed"] = res.overflowed;
  summary["last_value"] = res.rows.empty() ? Json(nullptr) : num(res.rows.back().F_value);
  summary["first_n_below_minus_1e6"] = first_below;
  summary["strictly_decreasing_from_n"] = res.rows.empty() ? -1 : res.rows[tail_start].n;
  summary["forcing_monotone"] = monotone;
  summary["zeta_derivative_bound"] = zeta_derivative_bound();
  summary["forcing_admissible"] = rep.admissible();

  Artifacts out(cfg, log);
  out.add("sharpness.csv", "csv", res.csv());
  out.add("sharpness.dat", "dat", res.dat());
  out.add("sharpness.json", "json", summary.dump(2) + "\n");
  out.flush();
  for (const auto& row : res.rows) log << "n=" << row.n << " F_eps=" << row.F_value << "\n";
  if (res.overflowed) log << "stopped: value left double range\n";
  return exit_ok;
}

int run_kernels_test(const ExperimentConfig& cfg, std::ostream& log) {
  const auto checks = kernel_property_suite(cfg);
  std::ostringstream csv;
  csv << "check,value,tolerance,passed\n";
  bool all = true;
  for (const auto& c : checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name << "  value=" << c.value << "  tol=" << c.tolerance << "\n";
    csv << c.name << ',' << fmt_num(c.value) << ',' << fmt_num(c.tolerance) << ',' << (c.passed ? "true" : "false")
        << '\n';
    all = all && c.passed;
  }
  Artifacts out(cfg, log);
  out.add("kernels.csv", "csv", csv.str());
  out.flush();
  return all ? exit_ok : exit_numerical;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
      dynamic_cast<const InputError*>(&e) || dynamic_cast<const ConfigError*>(&e))
    return exit_usage;
  return exit_numerical;
}

std::vector<KernelCheck> kernel_property_suite(const ExperimentConfig& cfg) {
  std::vector<KernelCheck> out;
  const std::vector<double> eps_list{0.2, 0.1, 0.05};

  for (double eps : eps_list) {
    const double T = 40.0 * eps;
    const double tail = (1.0 + T / eps) * std::exp(-T / eps);
    const double mass = integrate([&](double t) { return kernel_N(eps, t); }, 0.0, T);
    const double tol = 1e-8 + tail;
    out.push_back({"N_eps mass eps=" + short_num(eps), std::abs(mass - 1.0), tol, std::abs(mass - 1.0) <= tol});
  }

  const TimeFunction one{[](double) { return 1.0; }, GrowthEnvelope::bounded()};
  for (double alpha : {0.0, 1.0, 2.0}) {
    const double err = std::abs(laplace_moment(one, 1.0, alpha) - std::tgamma(alpha + 1.0));
    out.push_back({"Gamma moment alpha=" + short_num(alpha), err, 1e-6, err <= 1e-6});
  }

  const TimeFunction step{[](double t) { return t >= 1.0 ? 1.0 : 0.0; }, GrowthEnvelope::bounded()};
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : eps_list) {
    auto diff = [&](double s) { return std::abs(mollify(step, eps, s) - step(s)); };
    const double l1 = simpson(diff, 0.0, 1.0, 400) + simpson(diff, 1.0, 3.0, 800);
    out.push_back({"mollified step L1(0,3) decreasing eps=" + short_num(eps), l1, prev, l1 < prev});
    prev = l1;
  }

  const SpaceGrid grid = cfg.space_grid();
  const SpatialProfile g = SpatialProfile::gaussian(1.0, 0.5);
  const double eps_F = cfg.admissibility.eps_F;
  const double T = 2.0;
  const std::vector<std::pair<std::string, TimeFactor>> catalog{
      {"constant", TimeFactor::constant(1.0)},
      {"exp_decay", TimeFactor::exp_decay(1.0, 1.0)},
      {"polynomial", TimeFactor::polynomial({1.0, 0.5})}};
  for (const auto& [name, tau] : catalog) {
    const TimeFunction fn = Forcing::linear(tau, g).f_norm(grid);
    const double M = m_f(fn, eps_F, T);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100; ++k) {
      const double s = T * k / 99.0;
      for (double eps : eps_list) worst = std::max(worst, q_eps(fn, eps, s) - M);
    }
    out.push_back({"Q_eps <= M_F(T) " + name, worst, 0.0, worst <= 0.0});
  }
  return out;
}

ExperimentConfig resolve_config(const RunRequest& req) {
  ExperimentConfig cfg = req.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(req.config);
  if (req.eps) {
    cfg.problem.eps = *req.eps;
    cfg.problem.eps_list = {*req.eps};
    cfg.sharpness.eps = *req.eps;
  }
  if (req.jobs) cfg.jobs = *req.jobs;
  if (req.seed) cfg.seed = *req.seed;
  if (req.out) {
    cfg.outputs.directory = *req.out;
  } else if (const char* env = std::getenv("WIE_OUT_DIR"); env && *env) {
    cfg.outputs.directory = env;
  }
  cfg.validate();
  return cfg;
}

int run_subcommand(const RunRequest& req, std::ostream& log) {
  const ExperimentConfig cfg = resolve_config(req);
  if (req.subcommand == "minimize") return run_minimize(cfg, log);
  if (req.subcommand == "converge") return run_converge(cfg, log);
  if (req.subcommand == "oracle") return run_oracle(cfg, log);
  if (req.subcommand == "admissible") return run_admissible(cfg, log);
  if (req.subcommand == "sharpness") return run_sharpness(cfg, log);
  if (req.subcommand == "kernels-test") return run_kernels_test(cfg, log);
  throw ConfigError("unknown subcommand '" + req.subcommand + "'");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Weighted inertia-energy approximation of semilinear wave equations"};
  app.require_subcommand(1);

  RunRequest req;
  std::string config, out;
  double eps = 0.0;
  unsigned jobs = 1;
  std::uint64_t seed = 0;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"minimize", "minimize J_eps at one eps and report diagnostics"},
      {"converge", "eps sweep against the reference solution"},
      {"oracle", "leapfrog reference solution and its energy"},
      {"admissible", "check the forcing hypotheses"},
      {"sharpness", "F_eps(w_n) for a forcing without Laplace transform"},
      {"kernels-test", "kernel identity property suite"}};
  for (const auto& [name, help] : commands) {
    auto* sc = app.add_subcommand(name, help);
    auto* opt = sc->add_option("--config", config, "experiment configuration (JSON)")->check(CLI::ExistingFile);
    if (name != "kernels-test") opt->required();
    sc->add_option("--eps", eps, "override problem.eps (and the eps list)")->check(CLI::PositiveNumber);
    sc->add_option("--out", out, "output directory");
    sc->add_option("--jobs", jobs, "worker threads for eps sweeps")->check(CLI::Range(1u, 256u));
    sc->add_option("--seed", seed, "random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  const auto* sc = app.get_subcommands().front();
  req.subcommand = sc->get_name();
  req.config = config;
  if (sc->count("--eps")) req.eps = eps;
  if (sc->count("--out")) req.out = out;
  if (sc->count("--jobs")) req.jobs = jobs;
  if (sc->count("--seed")) req.seed = seed;

  try {
    return run_subcommand(req, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "wie " << req.subcommand << ": " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace wie
