#include <doctest.h>

#include <cmath>
#include <vector>

#include "wie/core.hpp"
#include "wie/errors.hpp"

using namespace wie;

TEST_CASE("trapezoid_space integrates constants exactly and x^2 to second order") {
  const SpaceGrid g = SpaceGrid::make(1.0, 101, Boundary::dirichlet);
  std::vector<double> zero(g.size(), 0.0), one(g.size(), 1.0), sq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g.x(i) * g.x(i);

  CHECK(trapezoid_space(zero, g) == 0.0);
  CHECK(trapezoid_space(one, g) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(trapezoid_space(sq, g) - 2.0 / 3.0) <= 1e-3);
}

TEST_CASE("periodic grids weight every node equally") {
  const SpaceGrid g = SpaceGrid::make(1.0, 16, Boundary::periodic);
  CHECK(g.spacing() == doctest::Approx(2.0 / 16.0));
  for (double w : g.weights()) CHECK(w == doctest::Approx(g.spacing()));
  CHECK_FALSE(g.is_fixed(0));
}

TEST_CASE("trapezoid_space rejects mismatched lengths") {
  const SpaceGrid g = SpaceGrid::make(1.0, 11, Boundary::dirichlet);
  std::vector<double> v(5, 1.0);
  CHECK_THROWS_AS(trapezoid_space(v, g), ShapeError);
}

TEST_CASE("weighted_time_integral reproduces the Gamma moments") {
  const TimeGrid tg = TimeGrid::weighted(30.0, 3001);
  const double tail = std::exp(-30.0) * 31.0;
  std::vector<double> one(tg.size(), 1.0), lin(tg.size()), zero(tg.size(), 0.0);
  for (std::size_t j = 0; j < tg.size(); ++j) lin[j] = tg.t(j);

  CHECK(std::abs(weighted_time_integral(one, tg) - 1.0) <= 1e-8 + tail);
  CHECK(std::abs(weighted_time_integral(lin, tg) - 1.0) <= 1e-6 + tail);
  CHECK(weighted_time_integral(zero, tg) == 0.0);

  std::vector<double> bad(tg.size() - 1, 1.0);
  CHECK_THROWS_AS(weighted_time_integral(bad, tg), ShapeError);
}

TEST_CASE("exponential trapezoid weights are exact on affine integrands") {
  const double h = 0.37, a = 0.7, b = -1.3;
  const std::size_t n = 9;
  const auto w = exp_trapezoid_weights(n, h);
  const double T = h * (n - 1);
  // int_0^T e^{-t}(a + b t) dt
  const double exact = a * (1.0 - std::exp(-T)) + b * (1.0 - (1.0 + T) * std::exp(-T));
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += w[j] * (a + b * h * j);
  CHECK(acc == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("time grids refuse a horizon that leaves too much tail mass") {
  CHECK_THROWS(TimeGrid::weighted(3.0, 31));
}

TEST_CASE("discrete derivatives of polynomial and trigonometric fields") {
  SUBCASE("constant field") {
    SpaceTimeField u(TimeGrid::plain(1.0, 11), SpaceGrid::make(1.0, 11, Boundary::dirichlet), 3.5);
    const auto d = discrete_derivatives(u);
    for (double v : d.u_t.values()) CHECK(v == doctest::Approx(0.0));
    for (double v : d.u_tt.values()) CHECK(v == doctest::Approx(0.0));
    for (double v : d.u_x.values()) CHECK(v == doctest::Approx(0.0));
  }
  SUBCASE("t squared") {
    SpaceTimeField u(TimeGrid::plain(2.0, 21), SpaceGrid::make(1.0, 5, Boundary::dirichlet));
    for (std::size_t j = 0; j < u.nt(); ++j)
      for (std::size_t i = 0; i < u.nx(); ++i) u(j, i) = u.time_grid().t(j) * u.time_grid().t(j);
    const auto d = discrete_derivatives(u);
    for (std::size_t j = 1; j + 1 < u.nt(); ++j) CHECK(std::abs(d.u_tt(j, 2) - 2.0) <= 1e-10);
  }
  SUBCASE("sin x") {
    const SpaceGrid g = SpaceGrid::make(1.0, 201, Boundary::dirichlet);
    SpaceTimeField u(TimeGrid::plain(0.04, 5), g);
    for (std::size_t j = 0; j < u.nt(); ++j)
      for (std::size_t i = 0; i < u.nx(); ++i) u(j, i) = std::sin(g.x(i));
    const auto d = discrete_derivatives(u);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(d.u_x(2, i) - std::cos(g.x(i))));
    CHECK(err <= 1e-3);
  }
}

TEST_CASE("spatial profiles") {
  const auto bump = SpatialProfile::bump(2.0, 1.0);
  CHECK(bump(0.0) == doctest::Approx(2.0));
  CHECK(bump(0.5) == doctest::Approx(2.0 * std::exp(1.0 - 1.0 / 0.75)));
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-1.5) == 0.0);
  CHECK(bump.support_radius() == doctest::Approx(1.0));

  const auto gauss = SpatialProfile::gaussian(1.0, 0.5, 0.25);
  CHECK(gauss(0.25) == doctest::Approx(1.0));
  CHECK(gauss(0.75) == doctest::Approx(std::exp(-0.5)));

  const auto tab = SpatialProfile::tabulated({-1.0, 0.0, 1.0}, {0.0, 2.0, 0.0});
  CHECK(tab(0.5) == doctest::Approx(1.0));
}

TEST_CASE("initial data validation") {
  const SpaceGrid g = SpaceGrid::make(2.0, 41, Boundary::dirichlet);
  auto d = InitialData::from_profiles(SpatialProfile::bump(1.0, 1.0), SpatialProfile::zero(), g);
  CHECK_NOTHROW(d.validate(g, 0.1));
  auto wide = InitialData::from_profiles(SpatialProfile::constant(1.0), SpatialProfile::zero(), g);
  CHECK_THROWS(wide.validate(g, 0.1));
  InitialData shortd{std::vector<double>(3, 0.0), std::vector<double>(3, 0.0)};
  CHECK_THROWS_AS(shortd.validate(g, 0.1), ShapeError);
}

TEST_CASE("grid constructors reject degenerate input") {
  CHECK_THROWS(SpaceGrid::make(-1.0, 11, Boundary::dirichlet));
  CHECK_THROWS(SpaceGrid::make(1.0, 2, Boundary::dirichlet));
  CHECK_THROWS(parse_boundary("neumann"));
  CHECK(parse_boundary("periodic") == Boundary::periodic);
}
