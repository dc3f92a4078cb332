#include <doctest.h>

#include <cmath>

#include "wie/diagnostics.hpp"
#include "wie/errors.hpp"

using namespace wie;

namespace {

WieProblem problem(double eps, SpatialProfile w0, SpatialProfile w1, Forcing f = Forcing::zero()) {
  const SpaceGrid g = SpaceGrid::make(2.0, 41, Boundary::dirichlet);
  return WieProblem::make(eps, 4.0, InitialData::from_profiles(w0, w1, g), rescaled_time_grid(1.0, eps), g,
                          std::move(f));
}

TimeFunction zero_norm() { return {[](double) { return 0.0; }, GrowthEnvelope::bounded()}; }

}  // namespace

TEST_CASE("energies vanish on the zero field") {
  const WieProblem p = problem(0.1, SpatialProfile::zero(), SpatialProfile::zero());
  const SpaceTimeField u(p.time, p.space);
  for (std::size_t j = 0; j < 20; ++j) {
    CHECK(kinetic_energy(u, p, j) == 0.0);
    CHECK(forward_potential(u, p, j) == 0.0);
    CHECK(approximate_energy(u, p, j) == 0.0);
  }
  const EnergyReport rep = check_appendix_bound(u, p, zero_norm());
  CHECK(rep.bound_ok);
  for (double m : rep.bound_margin) CHECK(m == doctest::Approx(rep.constants.Q));
  CHECK(rep.constants.Q == 0.0);
}

TEST_CASE("E_eps at the origin") {
  const WieProblem p = problem(0.1, SpatialProfile::bump(1.0, 1.0), SpatialProfile::bump(0.4, 0.7));
  const MinimizeResult res = minimize(p);
  REQUIRE(res.converged);
  const double w1sq = l2_norm_squared(p.data.w1, p.space);
  const double expected = 0.5 * w1sq + first_moment_W(res.u_eps, p);
  CHECK(approximate_energy(res.u_eps, p, 0) == doctest::Approx(expected).epsilon(2e-2));
  CHECK(kinetic_energy(res.u_eps, p, 0) == doctest::Approx(0.5 * w1sq).epsilon(2e-2));

  for (std::size_t j = 0; j < energy_node_limit(p.time, 1e-4); j += 7)
    CHECK(approximate_energy(res.u_eps, p, j) >= forward_potential(res.u_eps, p, j));
  CHECK_THROWS_AS(approximate_energy(res.u_eps, p, p.time.size() - 1), RangeError);

  const EnergyReport rep = check_appendix_bound(res.u_eps, p, zero_norm());
  CHECK(rep.lower_ok);
  CHECK(rep.bound_ok);
  CHECK(rep.constants.Q_bar == doctest::Approx(rep.constants.Q + 1.0));
}

TEST_CASE("Q_eps integral of a constant") {
  const TimeFunction c{[](double) { return 2.0; }, GrowthEnvelope::bounded()};
  const QepsIntegral q(c, 0.1, 3.0);
  CHECK_FALSE(q.zero());
  CHECK(q.value(1.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(q.cumulative(1.5) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(QepsIntegral(zero_norm(), 0.1, 3.0).zero());
}

TEST_CASE("energy inequality") {
  const SpaceGrid g = SpaceGrid::make(2.0, 41, Boundary::dirichlet);
  const SpaceTimeField w0(TimeGrid::plain(1.0, 11), g);
  const Forcing f = Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), SpatialProfile::gaussian(1.0, 0.5));
  const EnergyInequality zero = check_energy_inequality(w0, f.f_norm(g), 4.0);
  CHECK(zero.passed);
  for (std::size_t k = 0; k < zero.margin.size(); ++k) {
    CHECK(zero.margin[k] == doctest::Approx(zero.rhs[k]));
    CHECK(zero.margin[k] >= 0.0);
  }

  // the exact energy of cos t is constant, so the margin vanishes up to discretization
  const SpaceGrid per = SpaceGrid::make(1.0, 8, Boundary::periodic);
  SpaceTimeField w(TimeGrid::plain(3.0, 3001), per);
  for (std::size_t j = 0; j < w.nt(); ++j)
    for (std::size_t i = 0; i < w.nx(); ++i) w(j, i) = std::cos(w.time_grid().t(j));
  const EnergyInequality c = check_energy_inequality(w, zero_norm(), 2.0);
  CHECK(c.passed);
  CHECK(std::abs(c.min_margin) <= 1e-5);

  // growing energy without forcing fails
  for (std::size_t j = 0; j < w.nt(); ++j)
    for (std::size_t i = 0; i < w.nx(); ++i) w(j, i) = std::exp(w.time_grid().t(j));
  CHECK_FALSE(check_energy_inequality(w, zero_norm(), 2.0).passed);
}

TEST_CASE("three estimates with test functions") {
  const WieProblem p = problem(0.1, SpatialProfile::bump(1.0, 1.0), SpatialProfile::zero(),
                               Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), SpatialProfile::bump(1.0, 1.0)));
  const MinimizeResult res = minimize(p);
  REQUIRE(res.converged);
  const TimeFunction fn = p.forcing.f_norm(p.space);
  const double Q_bar = appendix_constants(res.u_eps, p).Q_bar;

  const Lemma1Estimates z = check_lemma1_estimates(res.u_eps, p, TestFunction::zero(), fn, Q_bar);
  for (int k = 0; k < 3; ++k) {
    CHECK(z.lhs[k] == 0.0);
    CHECK(z.margin(k) == doctest::Approx(z.rhs[k]));
  }
  CHECK(z.all());

  const Lemma1Estimates b = check_lemma1_estimates(res.u_eps, p, TestFunction::bump(1.0, 2.0), fn, Q_bar);
  CHECK(b.all());
  for (int k = 0; k < 3; ++k) CHECK(b.margin(k) > 0.0);

  const SpaceTimeField zero_u(p.time, p.space);
  const WieProblem pz = problem(0.1, SpatialProfile::zero(), SpatialProfile::zero(), p.forcing);
  const Lemma1Estimates u0 = check_lemma1_estimates(zero_u, pz, TestFunction::bump(1.0, 2.0), fn, 1.0);
  for (int k = 0; k < 2; ++k) CHECK(u0.lhs[k] == 0.0);

  CHECK_THROWS_AS(check_lemma1_estimates(res.u_eps, p, TestFunction::bump(-1.0, 2.0), fn, Q_bar), InputError);
  CHECK_THROWS_AS(check_lemma1_estimates(res.u_eps, p, TestFunction::bump(1.0, 1e6), fn, Q_bar), InputError);
}

TEST_CASE("convergence study on zero data") {
  const SpaceGrid g = SpaceGrid::make(2.0, 21, Boundary::dirichlet);
  SweepTemplate t{4.0, 0.45, -1.0, 1.0, 0.1, InitialData::zero(g), g, Forcing::zero(), MinimizeOptions{}};
  const OracleConfig oc{1.0, 0.0, true, 4.0, Forcing::zero(), g};
  const ConvergenceTable table = convergence_study(t, {0.2, 0.1, 0.05}, oc, 2);
  REQUIRE(table.runs.size() == 3);
  for (const auto& run : table.runs) {
    CHECK(run.l2_error == 0.0);
    CHECK(run.sup_error == 0.0);
  }
  CHECK(table.runs[1].eps == 0.1);
  CHECK(table.csv().rfind("eps,l2_error,sup_error", 0) == 0);

  CHECK_THROWS_AS(convergence_study(t, {0.1, 0.2}, oc), ParameterError);
  CHECK_THROWS_AS(convergence_study(t, {}, oc), ParameterError);
}

TEST_CASE("space-time distances") {
  const SpaceGrid g = SpaceGrid::make(1.0, 11, Boundary::dirichlet);
  const TimeGrid tg = TimeGrid::plain(1.0, 11);
  SpaceTimeField a(tg, g, 0.0), b(tg, g, 0.5);
  CHECK(space_time_l2(a, b) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(sup_distance(a, b) == doctest::Approx(0.5));
  SpaceTimeField c(TimeGrid::plain(1.0, 5), g);
  CHECK_THROWS_AS(space_time_l2(a, c), ShapeError);
}
