#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wie/core.hpp"
#include "wie/diagnostics.hpp"
#include "wie/forcing.hpp"
#include "wie/minimizer.hpp"
#include "wie/oracle.hpp"

namespace wie {

/// Catalog entry for a spatial profile. Only the keys of `kind` are read or
/// written.
struct ProfileSpec {
  std::string kind = "zero";  // zero|constant|bump|gaussian|sine|bump_derivative|tabulated
  double amplitude = 1.0;
  double radius = 1.0;
  double width = 1.0;
  double center = 0.0;
  double value = 0.0;
  double wavenumber = 1.0;
  double scale = 1.0;
  std::vector<double> xs{}, vs{};

  SpatialProfile build() const;
};

struct TimeFactorSpec {
  std::string kind = "constant";  // constant|exp_decay|polynomial|exp_growth|exp_square|tabulated
  double value = 0.0;
  double amplitude = 1.0;
  double rate = 1.0;
  std::vector<double> coeffs{1.0};
  std::vector<double> ts{}, vs{};

  TimeFactor build() const;
};

struct SpaceConfig {
  double half_length = 2.5;
  std::size_t points = 201;
  std::string boundary = "dirichlet";
};

struct ProblemConfig {
  double eps = 0.1;
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double eps_F = 0.45;
  double r = 4.0;
  double power_reg = -1.0;  // negative: default for r
  double T_phys = 1.0;
  double ht = 0.1;  // rescaled time step
  SpaceConfig space;
  ProfileSpec w0{"bump"};
  ProfileSpec w1{};
};

struct ForcingConfig {
  std::string kind = "zero";  // zero|linear|separable
  TimeFactorSpec time;
  ProfileSpec space{"gaussian"};
  std::string psi = "sine_gordon";
};

struct MinimizerConfig {
  std::string method = "lbfgs";
  int memory = 8;
  double grad_tol = 1e-6;
  int max_iters = 5000;
  double armijo_c1 = 1e-4;
  int max_backtracks = 60;
  int precond_refresh = 10;
  std::string seed_kind = "affine";  // affine|random
  double random_amplitude = 0.1;
};

struct OracleSection {
  double ht = 0.0;  // <= 0: half the space step
  bool include_power_term = true;
  std::string reference = "leapfrog";  // leapfrog|closed_form|dalembert
  double reference_ht = 0.01;          // closed_form and dalembert grids
};

struct DiagnosticsConfig {
  double slack = 0.02;
  double tail_tol = 1e-4;
  double safety_factor = 2.0;
  double energy_rel_tol = 0.02;
  double test_lo = 1.0;
  double test_hi = 4.0;
  double moment_factor = 1.1;
};

struct AdmissibilityConfig {
  double eps_F = 0.45;
  std::vector<double> windows{1.0, 5.0, 10.0};
  std::size_t sup_mesh = 10000;
};

struct SharpnessConfig {
  double eps = 0.2;
  int n_max = 40;
  TimeFactorSpec eta{"exp_square"};
  ProfileSpec g{"gaussian"};
};

struct OutputsConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json", "dat"};
  bool wants(const std::string& f) const;
};

struct ExperimentConfig {
  ProblemConfig problem;
  ForcingConfig forcing;
  MinimizerConfig minimizer;
  OracleSection oracle;
  DiagnosticsConfig diagnostics;
  AdmissibilityConfig admissibility;
  SharpnessConfig sharpness;
  OutputsConfig outputs;
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  /// Strict parse: unknown keys, wrong types and out-of-range values throw
  /// ConfigError. Missing keys take the defaults above.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  /// Every key materialized, in a fixed order.
  std::string to_json_text() const;

  void validate() const;

  SpaceGrid space_grid() const;
  InitialData initial_data(const SpaceGrid& grid) const;
  Forcing build_forcing() const;
  MinimizeOptions minimize_options() const;
  OracleConfig oracle_config(const SpaceGrid& grid) const;
  SweepTemplate sweep_template() const;
  WieProblem problem_at(double eps) const;
};

}  // namespace wie
