#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wie/config.hpp"

namespace wie {

/// Exit statuses of the runner.
enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_numerical = 3 };

/// Maps an exception to exit_usage (input, shape, parameter and config
/// errors) or exit_numerical (everything else).
int exit_code_for(const std::exception& e);

struct KernelCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Property suite of the kernel identities: normalization of N_eps, Gamma
/// moments, L1 convergence of the mollified step and Q_eps <= M_F(T).
std::vector<KernelCheck> kernel_property_suite(const ExperimentConfig& cfg);

/// Options collected from the command line.
struct RunRequest {
  std::string subcommand;
  std::filesystem::path config;
  std::optional<double> eps;
  std::optional<std::string> out;
  std::optional<unsigned> jobs;
  std::optional<std::uint64_t> seed;
};

/// Applies flag and environment overrides (WIE_OUT_DIR) to a loaded config.
ExperimentConfig resolve_config(const RunRequest& req);

/// Runs one subcommand and writes its artifacts. Returns exit_numerical when
/// a run finishes without meeting its own success criterion; throws on errors.
int run_subcommand(const RunRequest& req, std::ostream& log);

/// Full command-line entry point; returns the exit status.
int run_cli(int argc, char** argv);

}  // namespace wie
