#include <doctest.h>

#include <cmath>

#include "wie/errors.hpp"
#include "wie/kernels.hpp"

using namespace wie;

namespace {

TimeFunction constant_fn(double c) {
  return {[c](double) { return c; }, GrowthEnvelope::bounded()};
}

TimeFunction identity_fn() {
  return {[](double t) { return t; }, GrowthEnvelope::polynomial(1.0)};
}

}  // namespace

TEST_CASE("kernel N_eps") {
  CHECK(kernel_N(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(kernel_N(0.3, 0.0) == 0.0);

  const double eps = 0.3;
  const double mass = integrate([&](double t) { return kernel_N(eps, t); }, 0.0, 40.0);
  CHECK(std::abs(mass - 1.0) <= 1e-8);

  // stationary point at t = eps
  const double peak = kernel_N(eps, eps);
  CHECK(peak == doctest::Approx(std::exp(-1.0) / eps).epsilon(1e-12));
  CHECK(kernel_N(eps, 0.99 * eps) < peak);
  CHECK(kernel_N(eps, 1.01 * eps) < peak);
}

TEST_CASE("mollify reproduces constants and shifts the identity by 2 eps") {
  for (double s : {0.0, 0.5, 2.0}) {
    CHECK(std::abs(mollify(constant_fn(1.0), 0.1, s) - 1.0) <= 1e-8);
    CHECK(std::abs(mollify(identity_fn(), 0.1, s) - (s + 0.2)) <= 1e-6);
  }
  CHECK_THROWS_AS(mollify(constant_fn(1.0), 0.1, 0.0, 0.5, 1e-12), TailToleranceError);
  CHECK_THROWS_AS(mollify(constant_fn(1.0), -0.1, 0.0), ParameterError);
}

TEST_CASE("mollified indicator converges in L1") {
  const TimeFunction ind{[](double t) { return (t >= 1.0 && t <= 2.0) ? 1.0 : 0.0; }, GrowthEnvelope::bounded()};
  // composite midpoint rule, fine enough to resolve the eps = 0.05 layer
  auto l1 = [&](double eps) {
    const int n = 3000;
    const double h = 3.0 / n;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double s = (k + 0.5) * h;
      acc += std::abs(mollify(ind, eps, s) - ind(s)) * h;
    }
    return acc;
  };
  const double e1 = l1(0.2), e2 = l1(0.1), e3 = l1(0.05);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
}

TEST_CASE("q_eps") {
  CHECK(q_eps(constant_fn(3.0), 0.1, 0.7) == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::abs(q_eps(identity_fn(), 0.1, 1.0) - 1.2) <= 1e-6);
  CHECK(q_eps(constant_fn(0.0), 0.1, 1.0) == 0.0);

  const TimeFunction wild{[](double t) { return std::exp(t * t); }, GrowthEnvelope::superexponential()};
  CHECK_THROWS_AS(q_eps(wild, 0.1, 1.0), AdmissibilityError);
}

TEST_CASE("k_star closed forms") {
  const double eps_F = 0.25;
  CHECK(std::abs(k_star(constant_fn(1.0), eps_F, 0.0) - 2.0) <= 1e-6);
  CHECK(std::abs(k_star(constant_fn(1.0), eps_F, 1.0) - 2.0) <= 1e-6);
  CHECK(k_star(constant_fn(0.0), eps_F, 0.0) == 0.0);
}

TEST_CASE("m_f closed forms and the Q_eps bound") {
  CHECK(m_f(constant_fn(0.0), 0.25, 1.0) == 0.0);
  CHECK(std::abs(m_f(constant_fn(1.0), 0.25, 1.0) - (1.0 + std::exp(4.0))) <= 1e-4);

  const TimeFunction fn{[](double t) { return 1.0 + std::sin(t) * std::sin(t); }, GrowthEnvelope::bounded()};
  const double T = 2.0, eps_F = 0.45;
  const double M = m_f(fn, eps_F, T);
  for (int k = 0; k < 100; ++k) {
    const double s = T * k / 99.0;
    CHECK(q_eps(fn, 0.1, s) <= M);
  }
}

TEST_CASE("laplace moments against Gamma") {
  const double scale = 0.3;
  for (double alpha : {0.0, 1.0, 2.0}) {
    // int t^alpha e^{-t/scale} dt = Gamma(alpha+1) scale^{alpha+1}
    const double exact = std::tgamma(alpha + 1.0) * std::pow(scale, alpha + 1.0);
    CHECK(laplace_moment(constant_fn(1.0), scale, alpha) == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("growth envelopes") {
  CHECK(GrowthEnvelope::bounded().integrable_against(0.4));
  CHECK(GrowthEnvelope::polynomial(3.0).integrable_against(0.4));
  CHECK(GrowthEnvelope::exponential(2.0).integrable_against(0.4));
  CHECK(GrowthEnvelope::exponential(3.0).integrable_against(0.25));
  CHECK_FALSE(GrowthEnvelope::exponential(5.0).integrable_against(0.25));
  CHECK_FALSE(GrowthEnvelope::superexponential().integrable_against(0.01));
  CHECK(GrowthEnvelope::exponential(1.5).squared().parameter == doctest::Approx(3.0));
  CHECK_THROWS(parse_envelope("nope", 0.0));
}

TEST_CASE("sampled_sup finds an interior maximum") {
  const double s = sampled_sup([](double t) { return -(t - 0.3) * (t - 0.3); }, 0.0, 1.0, 1000);
  CHECK(s == doctest::Approx(0.0).epsilon(1e-6));
}
