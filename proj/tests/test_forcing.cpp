#include <doctest.h>

#include <cmath>

#include "wie/errors.hpp"
#include "wie/forcing.hpp"
#include "wie/functional.hpp"

using namespace wie;

TEST_CASE("time factors") {
  CHECK(TimeFactor::constant(2.0)(5.0) == 2.0);
  CHECK(TimeFactor::exp_decay(2.0, 0.5)(2.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(TimeFactor::polynomial({1.0, 0.0, 3.0})(2.0) == doctest::Approx(13.0));
  CHECK(TimeFactor::exp_square(1.0)(1.5) == doctest::Approx(std::exp(2.25)));
  CHECK(TimeFactor::exp_growth(1.0, 0.2)(1.0) == doctest::Approx(std::exp(0.2)));
  CHECK(TimeFactor::tabulated({0.0, 1.0}, {1.0, 3.0})(0.5) == doctest::Approx(2.0));

  CHECK(TimeFactor::exp_square(1.0).envelope().kind == GrowthEnvelope::Kind::superexponential);
  CHECK(TimeFactor::polynomial({1.0, 1.0}).envelope().kind == GrowthEnvelope::Kind::polynomial);
}

TEST_CASE("zero forcing vanishes identically") {
  const Forcing f = Forcing::zero();
  for (double v : {-2.0, 0.0, 3.0}) {
    CHECK(f.F(0.5, 0.1, v) == 0.0);
    CHECK(f.G(0.5, 0.1, v) == 0.0);
  }
  CHECK(f.f(0.5, 0.1) == 0.0);
  CHECK(f.vanishes_at_zero());
}

TEST_CASE("linear forcing has a v-independent derivative") {
  const auto g = SpatialProfile::gaussian(1.0, 0.5);
  const Forcing f = Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), g);
  const double t = 0.7, x = 0.2;
  const double b = std::exp(-t) * g(x);
  for (double v : {-1.0, 0.0, 2.5}) {
    CHECK(f.G(t, x, v) == doctest::Approx(b));
    CHECK(f.F(t, x, v) == doctest::Approx(b * v));
  }
  CHECK(f.f(t, x) == doctest::Approx(std::abs(b)));
}

TEST_CASE("sine-Gordon forcing") {
  const Forcing f = Forcing::separable(TimeFactor::constant(2.0), SpatialProfile::constant(1.0), Psi::sine_gordon);
  CHECK(f.F(0.3, 0.0, 0.0) == doctest::Approx(0.0));
  CHECK(f.G(0.3, 0.0, 0.0) == doctest::Approx(0.0));
  CHECK(f.F(0.3, 0.0, 1.0) == doctest::Approx(2.0 * (std::cos(1.0) - 1.0)));
  // G is the v-derivative of F
  const double v = 0.8, h = 1e-6;
  CHECK(f.G(0.3, 0.0, v) == doctest::Approx((f.F(0.3, 0.0, v + h) - f.F(0.3, 0.0, v - h)) / (2 * h)).epsilon(1e-6));
  CHECK(f.vanishes_at_zero());
  CHECK(parse_psi("tanh") == Psi::tanh);
  CHECK_THROWS(parse_psi("cosh"));
}

TEST_CASE("custom forcing is validated on samples") {
  Forcing::Evaluators ok{[](double t, double, double v) { return std::exp(-t) * v; },
                         [](double t, double, double) { return std::exp(-t); },
                         [](double t, double) { return std::exp(-t); }};
  CHECK_NOTHROW(Forcing::custom(ok, GrowthEnvelope::bounded()));

  Forcing::Evaluators wrong_derivative{[](double, double, double v) { return v * v; },
                                       [](double, double, double) { return 1.0; },
                                       [](double, double) { return 1.0; }};
  CHECK_THROWS_AS(Forcing::custom(wrong_derivative, GrowthEnvelope::bounded()), ForcingError);

  Forcing::Evaluators low_bound{[](double, double, double v) { return 3.0 * v; },
                                [](double, double, double) { return 3.0; },
                                [](double, double) { return 1.0; }};
  CHECK_THROWS_AS(Forcing::custom(low_bound, GrowthEnvelope::bounded()), ForcingError);
}

TEST_CASE("phi_eps") {
  const SpaceGrid g = SpaceGrid::make(1.0, 21, Boundary::dirichlet);
  const TimeGrid tg = TimeGrid::weighted(30.0, 601);
  const double c = 0.75;
  SpaceTimeField u(tg, g, c);

  CHECK(phi_eps(u, Forcing::zero(), 0.1) == 0.0);
  const Forcing one = Forcing::linear(TimeFactor::constant(1.0), SpatialProfile::constant(1.0));
  // int e^{-t} dt * int_{-1}^{1} 1 dx * c
  CHECK(std::abs(phi_eps(u, one, 0.1) - 2.0 * c) <= 1e-6);
}

TEST_CASE("phi_eps respects the linear growth bound on random fields") {
  const SpaceGrid g = SpaceGrid::make(2.0, 41, Boundary::dirichlet);
  const TimeGrid tg = TimeGrid::weighted(30.0, 301);
  const Forcing f = Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), SpatialProfile::gaussian(1.0, 0.5));
  const double eps = 0.1, eps_F = 0.45;
  const auto fn = f.f_norm(g);
  const double K = k_star(fn, eps_F, 0.0);
  const double C = estimate_C_F(f, g, eps_F).value;
  for (int trial = 0; trial < 5; ++trial) {
    SpaceTimeField u(tg, g);
    for (std::size_t j = 0; j < u.nt(); ++j)
      for (std::size_t i = 0; i < u.nx(); ++i)
        u(j, i) = std::sin((trial + 1) * g.x(i)) * std::cos(0.3 * trial * tg.t(j)) * (1.0 + 0.1 * tg.t(j));
    const double phi = phi_eps(u, f, eps);
    const double norm = std::sqrt(weighted_l2(u));
    CHECK(std::abs(phi) <= C + std::sqrt(K) * norm + 1e-10);
  }
}

TEST_CASE("C_F estimate") {
  const SpaceGrid g = SpaceGrid::make(2.0, 81, Boundary::dirichlet);
  const auto sg = Forcing::separable(TimeFactor::constant(1.0), SpatialProfile::gaussian(1.0, 0.5), Psi::sine_gordon);
  const CFEstimate e = estimate_C_F(sg, g, 0.45);
  CHECK(e.exact);
  CHECK(e.value == 0.0);

  // F(t,x,0) = e^{-t} h(x): eps^{-1} int e^{-t/eps} e^{-t} dt int h = int h / (1 + eps)
  const auto h = SpatialProfile::gaussian(1.0, 0.5);
  Forcing::Evaluators ev{[h](double t, double x, double v) { return std::exp(-t) * h(x) * (1.0 + 0.0 * v); },
                         [](double, double, double) { return 0.0; },
                         [](double, double) { return 0.0; }};
  const Forcing shifted = Forcing::custom(ev, GrowthEnvelope::bounded());
  const CFEstimate c = estimate_C_F(shifted, g, 0.45);
  double int_h = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) int_h += g.weights()[i] * h(g.x(i));
  const double eps_min = c.eps_mesh.front() < c.eps_mesh.back() ? c.eps_mesh.front() : c.eps_mesh.back();
  CHECK(c.value == doctest::Approx(int_h / (1.0 + eps_min)).epsilon(1e-6));
}

TEST_CASE("f_norm needs an envelope for custom forcing") {
  const SpaceGrid g = SpaceGrid::make(1.0, 11, Boundary::dirichlet);
  Forcing::Evaluators ev{[](double, double, double v) { return v; }, [](double, double, double) { return 1.0; },
                         [](double, double) { return 1.0; }};
  const Forcing f = Forcing::custom(ev, std::nullopt);
  CHECK_THROWS_AS(f.f_norm(g), InputError);

  const Forcing lin = Forcing::linear(TimeFactor::exp_decay(1.0, 1.0), SpatialProfile::constant(1.0));
  const auto fn = lin.f_norm(g);
  // ||e^{-t}||^2_{L2(-1,1)} = 2 e^{-2t}
  CHECK(fn(0.5) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
}
