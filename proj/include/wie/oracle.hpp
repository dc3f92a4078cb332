#pragma once

#include <vector>

#include "wie/core.hpp"
#include "wie/forcing.hpp"

namespace wie {

/// Explicit reference solver for w'' - w_xx = -|w|^{r-2} w + G(t, x, w).
struct OracleConfig {
  double T_phys = 1.0;
  double ht = 0.0;  // <= 0: half the space step
  bool include_power_term = true;
  double r = 4.0;
  Forcing forcing;
  SpaceGrid space;

  static constexpr double cfl_limit = 0.9;

  /// Time step actually used; throws ConfigError on a CFL violation.
  double time_step() const;
  TimeGrid time_grid() const;
};

/// Second-order leapfrog trajectory on the plain grid returned by
/// cfg.time_grid(). The first step uses the Taylor start
/// w^1 = w0 + ht w1 + ht^2/2 a(0, w0). Throws InstabilityError if |w| > 1e8.
SpaceTimeField leapfrog_solve(const OracleConfig& cfg, const InitialData& data);

/// Continues the recursion from the consecutive layers (prev, cur), the
/// latter at time t_cur, for `steps` steps of size ht (negative ht runs
/// backward). Returns the layers produced, last one at t_cur + steps*ht.
std::vector<std::vector<double>> leapfrog_continue(const OracleConfig& cfg, std::vector<double> prev,
                                                   std::vector<double> cur, double t_cur, double ht,
                                                   std::size_t steps);

/// E(t_j) = 1/2 ||w_t||^2 + W(w(t_j)), w_t by central differences (one-sided
/// second order at the ends).
std::vector<double> solution_energy(const SpaceTimeField& w, double r);

}  // namespace wie
