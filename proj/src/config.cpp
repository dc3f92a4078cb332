#include "wie/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "wie/errors.hpp"
#include "wie/io.hpp"

namespace wie {

namespace {

using Json = nlohmann::ordered_json;

// Reads keys of one object and rejects any key it was not asked about.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double num(const std::string& key, double def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }

  long long integer(const std::string& key, long long def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key, bool def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string str(const std::string& key, const std::string& def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::vector<double> nums(const std::string& key, const std::vector<double>& def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<std::string> strs(const std::string& key, const std::vector<std::string>& def) {
    seen_.insert(key);
    if (!j_.contains(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw ConfigError(where(key) + ": expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  /// Sub-object, or an empty object when absent.
  Section sub(const std::string& key) {
    seen_.insert(key);
    static const Json empty = Json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, where(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

template <class T>
bool one_of(const T& v, std::initializer_list<T> options) {
  return std::find(options.begin(), options.end(), v) != options.end();
}

ProfileSpec read_profile(Section s) {
  ProfileSpec p;
  p.kind = s.str("kind", "zero");
  if (p.kind == "zero") {
  } else if (p.kind == "constant") {
    p.value = s.num("value", 0.0);
  } else if (p.kind == "bump") {
    p.amplitude = s.num("amplitude", 1.0);
    p.radius = s.num("radius", 1.0);
    p.center = s.num("center", 0.0);
  } else if (p.kind == "gaussian") {
    p.amplitude = s.num("amplitude", 1.0);
    p.width = s.num("width", 1.0);
    p.center = s.num("center", 0.0);
  } else if (p.kind == "sine") {
    p.amplitude = s.num("amplitude", 1.0);
    p.wavenumber = s.num("wavenumber", 1.0);
  } else if (p.kind == "bump_derivative") {
    p.amplitude = s.num("amplitude", 1.0);
    p.radius = s.num("radius", 1.0);
    p.center = s.num("center", 0.0);
    p.scale = s.num("scale", 1.0);
  } else if (p.kind == "tabulated") {
    p.xs = s.nums("xs", {});
    p.vs = s.nums("vs", {});
  } else {
    throw ConfigError(s.where("kind") + ": unknown profile '" + p.kind + "'");
  }
  s.finish();
  return p;
}

Json write_profile(const ProfileSpec& p) {
  Json j;
  j["kind"] = p.kind;
  if (p.kind == "constant") {
    j["value"] = p.value;
  } else if (p.kind == "bump") {
    j["amplitude"] = p.amplitude;
    j["radius"] = p.radius;
    j["center"] = p.center;
  } else if (p.kind == "gaussian") {
    j["amplitude"] = p.amplitude;
    j["width"] = p.width;
    j["center"] = p.center;
  } else if (p.kind == "sine") {
    j["amplitude"] = p.amplitude;
    j["wavenumber"] = p.wavenumber;
  } else if (p.kind == "bump_derivative") {
    j["amplitude"] = p.amplitude;
    j["radius"] = p.radius;
    j["center"] = p.center;
    j["scale"] = p.scale;
  } else if (p.kind == "tabulated") {
    j["xs"] = p.xs;
    j["vs"] = p.vs;
  }
  return j;
}

TimeFactorSpec read_time_factor(Section s) {
  TimeFactorSpec t;
  t.kind = s.str("kind", "constant");
  if (t.kind == "constant") {
    t.value = s.num("value", 0.0);
  } else if (t.kind == "exp_decay" || t.kind == "exp_growth") {
    t.amplitude = s.num("amplitude", 1.0);
    t.rate = s.num("rate", 1.0);
  } else if (t.kind == "polynomial") {
    t.coeffs = s.nums("coeffs", {1.0});
  } else if (t.kind == "exp_square") {
    t.amplitude = s.num("amplitude", 1.0);
  } else if (t.kind == "tabulated") {
    t.ts = s.nums("ts", {});
    t.vs = s.nums("vs", {});
  } else {
    throw ConfigError(s.where("kind") + ": unknown time factor '" + t.kind + "'");
  }
  s.finish();
  return t;
}

Json write_time_factor(const TimeFactorSpec& t) {
  Json j;
  j["kind"] = t.kind;
  if (t.kind == "constant") {
    j["value"] = t.value;
  } else if (t.kind == "exp_decay" || t.kind == "exp_growth") {
    j["amplitude"] = t.amplitude;
    j["rate"] = t.rate;
  } else if (t.kind == "polynomial") {
    j["coeffs"] = t.coeffs;
  } else if (t.kind == "exp_square") {
    j["amplitude"] = t.amplitude;
  } else if (t.kind == "tabulated") {
    j["ts"] = t.ts;
    j["vs"] = t.vs;
  }
  return j;
}

// Library errors raised while building objects are configuration errors here.
template <class F>
auto as_config(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

SpatialProfile ProfileSpec::build() const {
  if (kind == "zero") return SpatialProfile::zero();
  if (kind == "constant") return SpatialProfile::constant(value);
  if (kind == "bump") return SpatialProfile::bump(amplitude, radius, center);
  if (kind == "gaussian") return SpatialProfile::gaussian(amplitude, width, center);
  if (kind == "sine") return SpatialProfile::sine(amplitude, wavenumber);
  if (kind == "bump_derivative") return SpatialProfile::bump_derivative(amplitude, radius, center, scale);
  if (kind == "tabulated") return SpatialProfile::tabulated(xs, vs);
  throw ConfigError("unknown profile '" + kind + "'");
}

TimeFactor TimeFactorSpec::build() const {
  if (kind == "constant") return TimeFactor::constant(value);
  if (kind == "exp_decay") return TimeFactor::exp_decay(amplitude, rate);
  if (kind == "exp_growth") return TimeFactor::exp_growth(amplitude, rate);
  if (kind == "polynomial") return TimeFactor::polynomial(coeffs);
  if (kind == "exp_square") return TimeFactor::exp_square(amplitude);
  if (kind == "tabulated") return TimeFactor::tabulated(ts, vs);
  throw ConfigError("unknown time factor '" + kind + "'");
}

bool OutputsConfig::wants(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  Section s(root, "");

  {
    auto p = s.sub("problem");
    auto& d = c.problem;
    d.eps = p.num("eps", d.eps);
    d.eps_list = p.nums("eps_list", d.eps_list);
    d.eps_F = p.num("eps_F", d.eps_F);
    d.r = p.num("r", d.r);
    d.power_reg = p.num("power_reg", d.power_reg);
    d.T_phys = p.num("T_phys", d.T_phys);
    d.ht = p.num("ht", d.ht);
    auto sp = p.sub("space");
    d.space.half_length = sp.num("half_length", d.space.half_length);
    const auto pts = sp.integer("points", static_cast<long long>(d.space.points));
    require(pts >= 3, sp.where("points") + ": need at least 3 points");
    d.space.points = static_cast<std::size_t>(pts);
    d.space.boundary = sp.str("boundary", d.space.boundary);
    sp.finish();
    d.w0 = p.has("w0") ? read_profile(p.sub("w0")) : d.w0;
    d.w1 = p.has("w1") ? read_profile(p.sub("w1")) : d.w1;
    p.sub("w0");
    p.sub("w1");
    p.finish();
  }
  {
    auto f = s.sub("forcing");
    auto& d = c.forcing;
    d.kind = f.str("kind", d.kind);
    if (f.has("time")) d.time = read_time_factor(f.sub("time"));
    if (f.has("space")) d.space = read_profile(f.sub("space"));
    d.psi = f.str("psi", d.psi);
    f.sub("time");
    f.sub("space");
    f.finish();
  }
  {
    auto m = s.sub("minimizer");
    auto& d = c.minimizer;
    d.method = m.str("method", d.method);
    d.memory = static_cast<int>(m.integer("memory", d.memory));
    d.grad_tol = m.num("grad_tol", d.grad_tol);
    d.max_iters = static_cast<int>(m.integer("max_iters", d.max_iters));
    d.armijo_c1 = m.num("armijo_c1", d.armijo_c1);
    d.max_backtracks = static_cast<int>(m.integer("max_backtracks", d.max_backtracks));
    d.precond_refresh = static_cast<int>(m.integer("precond_refresh", d.precond_refresh));
    d.seed_kind = m.str("seed_kind", d.seed_kind);
    d.random_amplitude = m.num("random_amplitude", d.random_amplitude);
    m.finish();
  }
  {
    auto o = s.sub("oracle");
    auto& d = c.oracle;
    d.ht = o.num("ht", d.ht);
    d.include_power_term = o.boolean("include_power_term", d.include_power_term);
    d.reference = o.str("reference", d.reference);
    d.reference_ht = o.num("reference_ht", d.reference_ht);
    o.finish();
  }
  {
    auto g = s.sub("diagnostics");
    auto& d = c.diagnostics;
    d.slack = g.num("slack", d.slack);
    d.tail_tol = g.num("tail_tol", d.tail_tol);
    d.safety_factor = g.num("safety_factor", d.safety_factor);
    d.energy_rel_tol = g.num("energy_rel_tol", d.energy_rel_tol);
    d.test_lo = g.num("test_lo", d.test_lo);
    d.test_hi = g.num("test_hi", d.test_hi);
    d.moment_factor = g.num("moment_factor", d.moment_factor);
    g.finish();
  }
  {
    auto a = s.sub("admissibility");
    auto& d = c.admissibility;
    d.eps_F = a.num("eps_F", d.eps_F);
    d.windows = a.nums("windows", d.windows);
    const auto mesh = a.integer("sup_mesh", static_cast<long long>(d.sup_mesh));
    require(mesh >= 2, a.where("sup_mesh") + ": need at least 2 points");
    d.sup_mesh = static_cast<std::size_t>(mesh);
    a.finish();
  }
  {
    auto h = s.sub("sharpness");
    auto& d = c.sharpness;
    d.eps = h.num("eps", d.eps);
    d.n_max = static_cast<int>(h.integer("n_max", d.n_max));
    if (h.has("eta")) d.eta = read_time_factor(h.sub("eta"));
    if (h.has("g")) d.g = read_profile(h.sub("g"));
    h.sub("eta");
    h.sub("g");
    h.finish();
  }
  {
    auto o = s.sub("outputs");
    c.outputs.directory = o.str("directory", c.outputs.directory);
    c.outputs.formats = o.strs("formats", c.outputs.formats);
    o.finish();
  }
  const auto seed = s.integer("seed", 0);
  require(seed >= 0, "seed: must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  const auto jobs = s.integer("jobs", 1);
  require(jobs >= 1 && jobs <= 256, "jobs: must lie in [1, 256]");
  c.jobs = static_cast<unsigned>(jobs);
  s.finish();
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return from_json_text(text);
}

std::string ExperimentConfig::to_json_text() const {
  Json j;
  const auto& p = problem;
  j["problem"] = {{"eps", p.eps},
                  {"eps_list", p.eps_list},
                  {"eps_F", p.eps_F},
                  {"r", p.r},
                  {"power_reg", p.power_reg},
                  {"T_phys", p.T_phys},
                  {"ht", p.ht},
                  {"space",
                   {{"half_length", p.space.half_length},
                    {"points", p.space.points},
                    {"boundary", p.space.boundary}}},
                  {"w0", write_profile(p.w0)},
                  {"w1", write_profile(p.w1)}};
  j["forcing"] = {{"kind", forcing.kind},
                  {"time", write_time_factor(forcing.time)},
                  {"space", write_profile(forcing.space)},
                  {"psi", forcing.psi}};
  const auto& m = minimizer;
  j["minimizer"] = {{"method", m.method},
                    {"memory", m.memory},
                    {"grad_tol", m.grad_tol},
                    {"max_iters", m.max_iters},
                    {"armijo_c1", m.armijo_c1},
                    {"max_backtracks", m.max_backtracks},
                    {"precond_refresh", m.precond_refresh},
                    {"seed_kind", m.seed_kind},
                    {"random_amplitude", m.random_amplitude}};
  j["oracle"] = {{"ht", oracle.ht},
                 {"include_power_term", oracle.include_power_term},
                 {"reference", oracle.reference},
                 {"reference_ht", oracle.reference_ht}};
  const auto& d = diagnostics;
  j["diagnostics"] = {{"slack", d.slack},
                      {"tail_tol", d.tail_tol},
                      {"safety_factor", d.safety_factor},
                      {"energy_rel_tol", d.energy_rel_tol},
                      {"test_lo", d.test_lo},
                      {"test_hi", d.test_hi},
                      {"moment_factor", d.moment_factor}};
  j["admissibility"] = {{"eps_F", admissibility.eps_F},
                        {"windows", admissibility.windows},
                        {"sup_mesh", admissibility.sup_mesh}};
  j["sharpness"] = {{"eps", sharpness.eps},
                    {"n_max", sharpness.n_max},
                    {"eta", write_time_factor(sharpness.eta)},
                    {"g", write_profile(sharpness.g)}};
  j["outputs"] = {{"directory", outputs.directory}, {"formats", outputs.formats}};
  j["seed"] = seed;
  j["jobs"] = jobs;
  return j.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
  const auto& p = problem;
  require(p.eps > 0.0 && p.eps < 0.5, "problem.eps: must lie in (0, 1/2)");
  require(!p.eps_list.empty(), "problem.eps_list: must not be empty");
  for (std::size_t k = 0; k < p.eps_list.size(); ++k) {
    require(p.eps_list[k] > 0.0 && p.eps_list[k] < 0.5, "problem.eps_list: values must lie in (0, 1/2)");
    require(k == 0 || p.eps_list[k] < p.eps_list[k - 1], "problem.eps_list: must be strictly decreasing");
  }
  require(p.eps_F > 0.0 && p.eps_F < 0.5, "problem.eps_F: must lie in (0, 1/2)");
  require(p.r > 1.0, "problem.r: must exceed 1");
  require(p.T_phys > 0.0, "problem.T_phys: must be positive");
  require(p.ht > 0.0 && p.ht <= 1.0, "problem.ht: must lie in (0, 1]");
  require(p.space.half_length > 0.0, "problem.space.half_length: must be positive");
  require(one_of<std::string>(p.space.boundary, {"dirichlet", "periodic"}),
          "problem.space.boundary: expected dirichlet or periodic");
  require(one_of<std::string>(forcing.kind, {"zero", "linear", "separable"}),
          "forcing.kind: expected zero, linear or separable");
  as_config("forcing.psi", [&] { return parse_psi(forcing.psi); });
  as_config("minimizer.method", [&] { return parse_method(minimizer.method); });
  require(one_of<std::string>(minimizer.seed_kind, {"affine", "random"}),
          "minimizer.seed_kind: expected affine or random");
  require(one_of<std::string>(oracle.reference, {"leapfrog", "closed_form", "dalembert"}),
          "oracle.reference: expected leapfrog, closed_form or dalembert");
  require(oracle.reference_ht > 0.0, "oracle.reference_ht: must be positive");
  require(diagnostics.slack >= 0.0 && diagnostics.energy_rel_tol >= 0.0, "diagnostics: tolerances must be >= 0");
  require(diagnostics.tail_tol > 0.0 && diagnostics.tail_tol < 1.0, "diagnostics.tail_tol: must lie in (0, 1)");
  require(diagnostics.safety_factor >= 1.0, "diagnostics.safety_factor: must be >= 1");
  require(diagnostics.test_hi > diagnostics.test_lo && diagnostics.test_lo > 0.0,
          "diagnostics: need 0 < test_lo < test_hi");
  require(admissibility.eps_F > 0.0 && admissibility.eps_F < 0.5, "admissibility.eps_F: must lie in (0, 1/2)");
  require(!admissibility.windows.empty(), "admissibility.windows: must not be empty");
  for (double w : admissibility.windows) require(w > 0.0, "admissibility.windows: values must be positive");
  require(sharpness.eps > 0.0 && sharpness.eps < 0.5, "sharpness.eps: must lie in (0, 1/2)");
  require(sharpness.n_max >= 0 && sharpness.n_max <= 60, "sharpness.n_max: must lie in [0, 60]");
  require(!outputs.directory.empty(), "outputs.directory: must not be empty");
  for (const auto& f : outputs.formats)
    require(one_of<std::string>(f, {"csv", "json", "dat"}), "outputs.formats: expected csv, json or dat");
  as_config("problem.w0", [&] { return p.w0.build(); });
  as_config("problem.w1", [&] { return p.w1.build(); });
  as_config("forcing.time", [&] { return forcing.time.build(); });
  as_config("forcing.space", [&] { return forcing.space.build(); });
  as_config("sharpness.eta", [&] { return sharpness.eta.build(); });
  as_config("sharpness.g", [&] { return sharpness.g.build(); });
  as_config("minimizer", [&] {
    minimize_options().validate();
    return 0;
  });
}

SpaceGrid ExperimentConfig::space_grid() const {
  return as_config("problem.space", [&] {
    return SpaceGrid::make(problem.space.half_length, problem.space.points, parse_boundary(problem.space.boundary));
  });
}

InitialData ExperimentConfig::initial_data(const SpaceGrid& grid) const {
  return InitialData::from_profiles(problem.w0.build(), problem.w1.build(), grid);
}

Forcing ExperimentConfig::build_forcing() const {
  if (forcing.kind == "linear") return Forcing::linear(forcing.time.build(), forcing.space.build());
  if (forcing.kind == "separable")
    return Forcing::separable(forcing.time.build(), forcing.space.build(), parse_psi(forcing.psi));
  return Forcing::zero();
}

MinimizeOptions ExperimentConfig::minimize_options() const {
  MinimizeOptions o;
  o.method = parse_method(minimizer.method);
  o.memory = minimizer.memory;
  o.grad_tol = minimizer.grad_tol;
  o.max_iters = minimizer.max_iters;
  o.armijo_c1 = minimizer.armijo_c1;
  o.max_backtracks = minimizer.max_backtracks;
  o.precond_refresh = minimizer.precond_refresh;
  o.seed_kind = minimizer.seed_kind == "random" ? SeedKind::random : SeedKind::affine;
  o.random_seed = seed;
  o.random_amplitude = minimizer.random_amplitude;
  return o;
}

OracleConfig ExperimentConfig::oracle_config(const SpaceGrid& grid) const {
  return OracleConfig{problem.T_phys, oracle.ht, oracle.include_power_term, problem.r, build_forcing(), grid};
}

SweepTemplate ExperimentConfig::sweep_template() const {
  const SpaceGrid grid = space_grid();
  return SweepTemplate{problem.r,      problem.eps_F,      problem.power_reg, problem.T_phys,    problem.ht,
                       initial_data(grid), grid,            build_forcing(),   minimize_options()};
}

WieProblem ExperimentConfig::problem_at(double eps) const {
  return sweep_template().make(eps);
}

}  // namespace wie
