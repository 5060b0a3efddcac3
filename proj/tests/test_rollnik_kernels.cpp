#include "doctest.h"

#include "bscount/errors.hpp"
#include "bscount/kernels.hpp"
#include "bscount/rollnik.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace bscount;

namespace {

constexpr double kPi = std::numbers::pi;

PotentialSpec make(ShapeKind kind, double strength, double range = 1.0) {
  PotentialSpec p;
  p.attractive.kind = kind;
  p.attractive.range = range;
  p.strength = strength;
  return p;
}

RadialGrid template_grid() {
  RadialGrid g;
  g.scheme = GridScheme::Sinh;
  g.n = 1500;
  g.r0 = 1.0;
  g.r_max = 1e4;
  return g;
}

// Monte-Carlo estimate of ∫∫ v(x)v(y)/|x−y|² d³x d³y for v = e^{−r}/r.
// x is drawn from v/‖v‖₁ (radius ~ Gamma(2,1)), z = y − x has |z| ~ Exp(1/2)
// with uniform direction, so the integrand weight is ‖v‖₁·4π·v(x+z)/p(|z|).
double yukawa_rollnik_mc(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> radius(2.0, 1.0);
  std::exponential_distribution<double> step(0.5);
  std::normal_distribution<double> gauss;
  auto direction = [&] {
    double a = gauss(rng), b = gauss(rng), c = gauss(rng);
    const double n = std::sqrt(a * a + b * b + c * c);
    return std::array<double, 3>{a / n, b / n, c / n};
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = radius(rng);
    const auto dx = direction();
    const double rho = step(rng);
    const auto dz = direction();
    double y2 = 0.0;
    for (int k = 0; k < 3; ++k) y2 += std::pow(r * dx[k] + rho * dz[k], 2);
    const double ry = std::sqrt(y2);
    const double p = 0.5 * std::exp(-0.5 * rho);
    sum += std::exp(-ry) / ry / p;
  }
  return 4.0 * kPi * 4.0 * kPi * sum / static_cast<double>(samples);
}

// Fourier transform of (k² + ε)^{−p} in three dimensions (Matérn form).
double matern(double p, double eps, double R) {
  const double nu = 1.5 - p;
  const double k = std::sqrt(eps);
  return std::pow(2.0, 1.0 - p) / (std::pow(2.0 * kPi, 1.5) * std::tgamma(p)) * std::pow(k / R, nu) *
         boost::math::cyl_bessel_k(nu, k * R);
}

}  // namespace

TEST_CASE("Rollnik norm basics") {
  CHECK(rollnik_norm(make(ShapeKind::Yukawa, 0.0)) == 0.0);
  const double one = rollnik_norm(make(ShapeKind::Gaussian, 1.0));
  for (const double lambda : {0.5, 3.0, 10.0}) {
    CHECK(rollnik_norm(make(ShapeKind::Gaussian, lambda)) == doctest::Approx(lambda * one).epsilon(1e-9));
  }
  CHECK(rollnik_integral(make(ShapeKind::Gaussian, 2.0)) == doctest::Approx(4.0 * one * one).epsilon(1e-9));
  CHECK_THROWS_AS(rollnik_integral(make(ShapeKind::Yukawa, 1.0), 0.125), PreconditionError);
  CHECK_THROWS_AS(rollnik_integral(make(ShapeKind::Yukawa, 1.0), -0.01), PreconditionError);
}

TEST_CASE("Rollnik integral of the Yukawa shape against Monte Carlo") {
  const double quad = rollnik_integral(make(ShapeKind::Yukawa, 1.0));
  const double mc = yukawa_rollnik_mc(4'000'000, 0xB5C0);
  CHECK(quad == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("Rollnik integral of the square well in closed form") {
  // For v = 1 on the unit ball the double integral is 4π².
  CHECK(rollnik_integral(make(ShapeKind::SquareWell, 1.0)) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-6));
}

TEST_CASE("Rollnik integral obeys range rescaling for every gamma") {
  // Rescaling r → a r multiplies the γ-integral by a^{4+8γ}.
  for (const double g : {0.0, 0.05, 0.1}) {
    const double i1 = rollnik_integral(make(ShapeKind::Gaussian, 1.0, 1.0), g);
    const double i2 = rollnik_integral(make(ShapeKind::Gaussian, 1.0, 2.0), g);
    CHECK(i2 == doctest::Approx(i1 * std::pow(2.0, 4.0 + 8.0 * g)).epsilon(1e-7));
  }
}

TEST_CASE("Schwinger count bound") {
  const RadialGrid g = template_grid();
  const auto sub = schwinger_bound_check(make(ShapeKind::SquareWell, 2.0), g);
  CHECK(sub.count_total == 0);
  CHECK(sub.holds);

  const auto one = schwinger_bound_check(make(ShapeKind::SquareWell, 5.0), g);
  CHECK(one.count_total == 1);
  CHECK(one.bound > 1.0);
  CHECK(one.holds);

  const auto deep = schwinger_bound_check(make(ShapeKind::SquareWell, 200.0), g);
  CHECK(deep.counts_per_ell.size() >= 3);
  CHECK(deep.count_total > 5);
  CHECK(deep.holds);

  for (const auto& p : {make(ShapeKind::Yukawa, 8.0), make(ShapeKind::Exponential, 20.0), make(ShapeKind::Gaussian, 40.0)}) {
    const auto r = schwinger_bound_check(p, g);
    CHECK(r.holds);
    CHECK(static_cast<double>(r.count_total) <= r.bound);
  }
  CHECK_THROWS_AS(schwinger_bound_check(make(ShapeKind::Yukawa, 0.0), g), PreconditionError);
}

TEST_CASE("resolvent-power kernel at gamma = 0") {
  CHECK(resolvent_power_bound_constant(1.0) == doctest::Approx(1.0 / (4.0 * kPi)));
  for (const double eps : {0.01, 0.3, 4.0, 90.0}) {
    for (const double R : {0.1, 0.7, 2.0, 10.0}) {
      const auto v = resolvent_power_kernel(0.0, eps, R);
      const double closed = std::exp(-std::sqrt(eps) * R) / (4.0 * kPi * R);
      CHECK(v.value == doctest::Approx(closed).epsilon(1e-6));
      CHECK(v.bound == doctest::Approx(1.0 / (4.0 * kPi * R)));
      CHECK(v.within_bound);
    }
  }
}

TEST_CASE("resolvent-power kernel for gamma > 0") {
  for (const double gamma : {0.05, 0.1, 0.2}) {
    const double p = 1.0 + 2.0 * gamma;
    const double cp = std::pow(2.0, -2.0 * p) * std::tgamma(1.5 - p) / (std::pow(kPi, 1.5) * std::tgamma(p));
    CHECK(resolvent_power_bound_constant(p) == doctest::Approx(cp).epsilon(1e-14));
    for (const double eps : {0.01, 1.0, 50.0}) {
      for (const double R : {0.1, 1.0, 5.0}) {
        const auto a = resolvent_power_kernel(gamma, eps, R, Substitution::LogVariable);
        const auto b = resolvent_power_kernel(gamma, eps, R, Substitution::PowerVariable);
        CHECK(a.value == doctest::Approx(matern(p, eps, R)).epsilon(1e-8));
        CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8));
        CHECK(a.within_bound);
        CHECK(a.value <= cp * std::pow(R, 2.0 * p - 3.0));
      }
    }
  }
  const auto a = resolvent_power_kernel(0.2, 1.0, 2.0, Substitution::LogVariable);
  const auto b = resolvent_power_kernel(0.2, 1.0, 2.0, Substitution::PowerVariable);
  CHECK(std::abs(a.value - b.value) <= 1e-8 * a.value);

  CHECK_THROWS_AS(resolvent_power_kernel(0.25, 1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(resolvent_power_kernel(0.1, 0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(resolvent_power_kernel(0.1, 1.0, 0.0), PreconditionError);
  CHECK_THROWS_AS(resolvent_power_bound_constant(1.5), PreconditionError);
}
