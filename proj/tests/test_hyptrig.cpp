#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypext/hyptrig.hpp"

using namespace hypext;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;
}  // namespace

TEST_CASE("leg_opposite endpoints and frozen value") {
  CHECK(leg_opposite(2.0, kHalfPi) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(leg_opposite(2.0, 0.0) == 0.0);
  // asinh(sinh(2) sin(pi/6)), high-precision reference
  CHECK(leg_opposite(2.0, kPi / 6) == doctest::Approx(1.3569444900743065).epsilon(1e-13));
  CHECK_THROWS_AS(leg_opposite(-1.0, 0.3), std::domain_error);
  CHECK_THROWS_AS(leg_opposite(1.0, 2.0), std::domain_error);
}

TEST_CASE("leg_opposite agrees with the hyperboloid measurement") {
  const double s = 2.0, beta = kPi / 6;
  const double r = leg_opposite(s, beta);
  const double t = leg_adjacent(s, beta);
  const RightTriangle tr = build_right_triangle(t, r);
  CHECK(tr.s == doctest::Approx(s).epsilon(1e-12));
  CHECK(tr.beta == doctest::Approx(beta).epsilon(1e-12));
}

TEST_CASE("angle_opposite endpoints and round trip") {
  CHECK(angle_opposite(1.5, 1.5) == doctest::Approx(kHalfPi).epsilon(1e-12));
  CHECK(angle_opposite(0.0, 1.5) == 0.0);
  CHECK(angle_opposite(leg_opposite(3.0, 0.7), 3.0) == doctest::Approx(0.7).epsilon(1e-13));
  CHECK_THROWS_AS(angle_opposite(2.0, 1.0), std::domain_error);
}

TEST_CASE("leg_adjacent endpoints and measured value") {
  CHECK(leg_adjacent(2.0, kHalfPi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(leg_adjacent(2.0, 0.0) == 2.0);
  // Frozen from the closed form; cross-checked against the hyperboloid.
  const double t = leg_adjacent(2.5, 1.0);
  CHECK(t == doctest::Approx(0.59442406568572506).epsilon(1e-13));
  const RightTriangle tr = build_right_triangle(t, leg_opposite(2.5, 1.0));
  CHECK(tr.s == doctest::Approx(2.5).epsilon(1e-12));
  // Pythagoras closure.
  const double r = leg_opposite(2.5, 1.0);
  CHECK(std::cosh(2.5) == doctest::Approx(std::cosh(r) * std::cosh(t)).epsilon(1e-13));
}

TEST_CASE("theta_reparam identities") {
  CHECK(theta_reparam(5.0, kHalfPi) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(theta_reparam_inv(5.0, kHalfPi) == doctest::Approx(5.0).epsilon(1e-15));
  // asinh(sinh(10)/2)
  CHECK(theta_reparam(10.0, kPi / 6) == doctest::Approx(9.3068528256235155).epsilon(1e-13));
  // asinh(sqrt(2) sinh(3))
  CHECK(theta_reparam_inv(3.0, kPi / 4) == doctest::Approx(3.3453349834855755).epsilon(1e-13));
  CHECK(theta_reparam_inv(theta_reparam(7.0, 0.9), 0.9) == doctest::Approx(7.0).epsilon(1e-14));
  // lambda(lambda') - lambda' approaches log(sin(theta)).
  for (double theta : {kPi / 6, kPi / 4, 1.2})
    CHECK(theta_reparam(45.0, theta) - 45.0 ==
          doctest::Approx(std::log(std::sin(theta))).epsilon(1e-12));
}

TEST_CASE("round trips over the sampled ranges") {
  // The inverse pair is exercised on a deterministic lattice; the angle
  // round trip degenerates at beta -> pi/2 where asin loses conditioning,
  // so the endpoint is checked exactly via the clamp.
  double worst_angle = 0, worst_lambda = 0;
  for (int i = 0; i <= 40; ++i) {
    const double s = 0.1 + (40.0 - 0.1) * i / 40.0;
    for (int j = 0; j <= 200; ++j) {
      const double beta = kHalfPi * j / 200.0;
      worst_angle = std::max(worst_angle,
                             std::abs(angle_opposite(leg_opposite(s, beta), s) - beta));
    }
    for (int j = 1; j <= 40; ++j) {
      const double theta = 0.1 + (kHalfPi - 0.1) * j / 40.0;
      worst_lambda = std::max(worst_lambda,
                              std::abs(theta_reparam_inv(theta_reparam(s, theta), theta) - s));
    }
  }
  CHECK(worst_angle < 1e-10);
  CHECK(worst_lambda < 1e-10);
  CHECK(angle_opposite(leg_opposite(40.0, kHalfPi), 40.0) == kHalfPi);
}

TEST_CASE("monotonicity of the opposite leg") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> us(0.1, 39.0);
  std::uniform_real_distribution<double> ub(0.05, kHalfPi - 0.15);
  for (int i = 0; i < 500; ++i) {
    const double s = us(rng), beta = ub(rng);
    CHECK(leg_opposite(s + 0.05, beta) > leg_opposite(s, beta));
    CHECK(leg_opposite(s, beta + 0.05) > leg_opposite(s, beta));
    CHECK(leg_opposite(s, beta) <= s + 1e-12);
  }
}

TEST_CASE("overflow safety up to length 700") {
  for (double a : {50.0, 100.0, 355.0, 700.0}) {
    const double r = leg_opposite(a, 0.3);
    CHECK(std::isfinite(r));
    CHECK(r == doctest::Approx(a + std::log(std::sin(0.3))).epsilon(1e-12));
    const double t = leg_adjacent(a, 0.3);
    CHECK(std::isfinite(t));
    // Pythagoras in log form.
    CHECK(log_cosh(a) == doctest::Approx(log_cosh(r) + log_cosh(t)).epsilon(1e-12));
    CHECK(theta_reparam_inv(theta_reparam(a, 0.2), 0.2) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("reparam_cut_radius asymptotics") {
  ReparamParams p;
  p.theta = kPi / 3;
  p.b = -2.0;
  const double lambda = 30.0, beta = 1.0;
  const double offset = p.b + std::log(std::sin(beta) / std::sin(p.theta));
  CHECK(reparam_cut_radius(lambda, beta, p) - lambda == doctest::Approx(offset).epsilon(1e-6));

  // beta = theta, b = 0: the radius tracks lambda itself.
  ReparamParams q;
  q.theta = 0.8;
  q.b = 0.0;
  CHECK(reparam_cut_radius(35.0, 0.8, q) == doctest::Approx(35.0).epsilon(1e-9));

  ReparamParams bad;
  bad.theta = kHalfPi;
  bad.b = -10.0;
  CHECK_THROWS_AS(reparam_cut_radius(1.0, 0.3, bad), std::domain_error);
}

TEST_CASE("asymptotic offset uniform over the sampled box") {
  double worst = 0;
  for (double lambda : {30.0, 45.0, 60.0})
    for (double theta : {kPi / 6, kPi / 4, kHalfPi})
      for (double b : {-5.0, -1.0, 2.0, 5.0})
        for (int j = 0; j <= 12; ++j) {
          const double beta = 0.2 + (kHalfPi - 0.2) * j / 12.0;
          ReparamParams p;
          p.theta = theta;
          p.b = b;
          const double predicted = b + std::log(std::sin(beta) / std::sin(theta));
          worst = std::max(worst,
                           std::abs(reparam_cut_radius(lambda, beta, p) - lambda - predicted));
        }
  CHECK(worst <= 1e-6);
}

TEST_CASE("hyperboloid triangle oracle") {
  SUBCASE("degenerate legs") {
    const RightTriangle a = build_right_triangle(0.0, 2.0);
    CHECK(a.s == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.beta == doctest::Approx(kHalfPi));
    const RightTriangle b = build_right_triangle(2.0, 0.0);
    CHECK(b.s == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b.beta == 0.0);
  }
  SUBCASE("unit legs close under Pythagoras") {
    const RightTriangle tr = build_right_triangle(1.0, 1.0);
    CHECK(tr.s == doctest::Approx(1.5133740065965040).epsilon(1e-13));
    CHECK(tr.beta == doctest::Approx(angle_opposite(1.0, tr.s)).epsilon(1e-12));
    CHECK(tr.alpha == doctest::Approx(angle_opposite(1.0, tr.s)).epsilon(1e-12));
  }
  SUBCASE("closure invariants over random legs") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> leg(1e-3, 5.0);
    double w1 = 0, w2 = 0, w3 = 0;
    for (int i = 0; i < 10000; ++i) {
      const RightTriangle tr = build_right_triangle(leg(rng), leg(rng));
      w1 = std::max(w1, std::abs(std::sinh(tr.r) - std::sin(tr.beta) * std::sinh(tr.s)));
      w2 = std::max(w2, std::abs(std::cosh(tr.r) * std::sinh(tr.t) -
                                 std::cos(tr.beta) * std::sinh(tr.s)));
      w3 = std::max(w3, std::abs(std::cosh(tr.s) - std::cosh(tr.r) * std::cosh(tr.t)));
    }
    CHECK(w1 < 1e-9);
    CHECK(w2 < 1e-9);
    CHECK(w3 < 1e-9);
  }
}

TEST_CASE("fermi polar residual") {
  CHECK(fermi_polar_residual(1.0, 0.8, 1e-4) < 1e-6);
  CHECK(fermi_polar_residual(2.0, 1e-3, 1e-5) < 1e-5);
  SUBCASE("second-order stencil") {
    const double coarse = fermi_polar_residual(0.5, 0.5, 2e-2);
    const double fine = fermi_polar_residual(0.5, 0.5, 1e-2);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.5));
  }
  SUBCASE("signed coordinates cross the axis") {
    CHECK(fermi_polar_residual(-1.2, 0.4, 1e-4) < 1e-6);
    CHECK(fermi_polar_residual(0.7, -0.9, 1e-4) < 1e-6);
  }
  CHECK_THROWS_AS(fermi_polar_residual(1.0, 1.0, 0.0), std::domain_error);
}
