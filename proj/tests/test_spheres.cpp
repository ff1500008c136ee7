#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypext/spheres.hpp"

using namespace hypext;

namespace {

constexpr double kPi = std::numbers::pi;

Vec random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Vec v(m);
  do
    for (int i = 0; i < m; ++i) v[i] = normal(rng);
  while (v.norm() < 1e-6);
  return v / v.norm();
}

}  // namespace

TEST_CASE("atlas construction and coverage") {
  CHECK_THROWS_AS(make_atlas(1), std::domain_error);
  CHECK(make_atlas(2).charts().size() == 4);
  CHECK(make_atlas(3).charts().size() == 6);
  CHECK(make_atlas(5).charts().size() == 10);

  std::mt19937_64 rng(11);
  for (int m : {2, 3, 5}) {
    const Atlas atlas = make_atlas(m);
    for (int i = 0; i < 100000 / m; ++i) {
      const Vec u = random_unit(rng, m);
      bool covered = false;
      for (const Chart& c : atlas.charts()) covered = covered || atlas.contains(c, u);
      REQUIRE(covered);
    }
  }
}

TEST_CASE("embed and project invert each other") {
  const Atlas atlas = make_atlas(4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  for (const Chart& c : atlas.charts())
    for (int i = 0; i < 50; ++i) {
      Vec x(3);
      for (int j = 0; j < 3; ++j) x[j] = unif(rng);
      const Vec X = atlas.embed(c, x);
      CHECK(X.norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK((atlas.project(c, X) - x).norm() < 1e-14);
    }
}

TEST_CASE("transitions") {
  const Atlas atlas = make_atlas(3);
  Vec x(2);
  x << 0.3, -0.2;

  SUBCASE("identity on the same chart") {
    CHECK((transition(atlas, 0, 0, x) - x).norm() == 0.0);
  }
  SUBCASE("consistency with the embedding") {
    const Vec X = atlas.embed(atlas.chart(0), x);
    for (const Chart& c : atlas.charts()) {
      if (!atlas.contains(c, X)) continue;
      const Vec y = transition(atlas, 0, c.id, x);
      CHECK((atlas.embed(c, y) - X).norm() < 1e-12);
    }
  }
  SUBCASE("round trip is the identity") {
    const Vec y = transition(atlas, 0, 2, x);
    CHECK((transition(atlas, 2, 0, y) - x).norm() < 1e-13);
  }
  SUBCASE("angle arithmetic on the circle") {
    const Atlas circle = make_atlas(2);
    // chart 0: axis 0, sign +; chart 2: axis 1, sign +.
    Vec p(1);
    p << 0.4;
    const Vec X = circle.embed(circle.chart(0), p);
    const double angle = std::atan2(X[1], X[0]);
    const Vec y = transition(circle, 0, 2, p);
    CHECK(y[0] == doctest::Approx(std::cos(angle)).epsilon(1e-14));
  }
  SUBCASE("outside the target chart") {
    Vec far(2);
    far << 0.0, 0.0;
    CHECK_THROWS_AS(transition(atlas, 0, 1, far), std::domain_error);
  }
}

TEST_CASE("round metric components") {
  const SphereForm sigma = round_metric(3);
  const Vec zero = Vec::Zero(2);
  CHECK((sigma.eval(0, zero) - Mat::Identity(2, 2)).norm() == 0.0);

  Vec x(2);
  x << 0.5, -0.3;
  const Mat M = sigma.eval(0, x);
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-14);
  const Mat expected =
      Mat::Identity(2, 2) + x * x.transpose() / (1.0 - x.squaredNorm());
  CHECK((M - expected).norm() < 1e-15);
}

TEST_CASE("great-circle length from the round field") {
  // Quadrature along a tilted great circle of S^2; the speed should be
  // identically 1, so Simpson over [0, 2 pi] returns 2 pi.
  const SphereForm sigma = round_metric(3);
  Vec A(3), B(3);
  A << 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0);
  B << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  const int N = 512;
  double length = 0;
  for (int i = 0; i < N; ++i) {
    auto speed = [&](double t) {
      const Vec gamma = std::cos(t) * A + std::sin(t) * B;
      const Vec dgamma = -std::sin(t) * A + std::cos(t) * B;
      return std::sqrt(sigma.eval_tangents(gamma, dgamma, dgamma));
    };
    const double a = 2 * kPi * i / N, b = 2 * kPi * (i + 1) / N;
    length += (b - a) / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b));
  }
  CHECK(length == doctest::Approx(2 * kPi).epsilon(1e-9));
}

TEST_CASE("overlap compatibility of the built-in fields") {
  for (int m : {3, 5}) {
    const SphereForm sigma = round_metric(m);
    const SphereForm pert = perturbation_field(m);
    const Atlas& atlas = sigma.atlas();
    const int charts = static_cast<int>(atlas.charts().size());
    for (int a = 0; a < charts; ++a)
      for (int b = 0; b < charts; ++b) {
        if (a == b) continue;
        CHECK(overlap_residual(sigma, a, b, 100, 1234 + a * charts + b) < 1e-8);
        CHECK(overlap_residual(pert, a, b, 100, 99 + a * charts + b) < 1e-8);
      }
  }
}

TEST_CASE("c2_distance basics") {
  const SphereForm sigma = round_metric(3);
  GridSpec grid;
  grid.per_axis = 9;

  SUBCASE("identical fields") {
    const C2Distance d = c2_distance(sigma, sigma, grid);
    CHECK(d.d0 == 0.0);
    CHECK(d.d1 == 0.0);
    CHECK(d.d2 == 0.0);
  }
  SUBCASE("scaling is linear") {
    const C2Distance d1 = c2_distance(scale_form(1.25, sigma), sigma, grid);
    const C2Distance d2 = c2_distance(scale_form(1.50, sigma), sigma, grid);
    CHECK(d2.d0 == doctest::Approx(2.0 * d1.d0).epsilon(1e-10));
    CHECK(d2.d1 == doctest::Approx(2.0 * d1.d1).epsilon(1e-8));
    CHECK(d2.total() == doctest::Approx(2.0 * d1.total()).epsilon(1e-7));
  }
  SUBCASE("pseudometric on the grid") {
    const SphereForm a = add_forms(sigma, scale_form(0.05, perturbation_field(3)));
    const SphereForm b = scale_form(1.1, sigma);
    const C2Distance dab = c2_distance(a, b, grid);
    const C2Distance dba = c2_distance(b, a, grid);
    CHECK(dab.d0 == dba.d0);
    CHECK(dab.d1 == dba.d1);
    CHECK(dab.d2 == dba.d2);
    const C2Distance das = c2_distance(a, sigma, grid);
    const C2Distance dsb = c2_distance(sigma, b, grid);
    CHECK(dab.d0 <= das.d0 + dsb.d0 + 1e-15);
    CHECK(dab.total() <= das.total() + dsb.total() + 1e-12);
  }
  SUBCASE("mismatched atlases") {
    CHECK_THROWS_AS(c2_distance(sigma, round_metric(4), grid), std::invalid_argument);
  }
}

TEST_CASE("c2_distance stability under grid refinement") {
  const SphereForm sigma = round_metric(3);
  const SphereForm other = add_forms(sigma, scale_form(0.05, perturbation_field(3)));
  GridSpec coarse;
  coarse.per_axis = 17;
  GridSpec dense = coarse;
  dense.per_axis = 33;
  dense.cap_per_chart = 4000;
  const C2Distance dc = c2_distance(other, sigma, coarse);
  const C2Distance dd = c2_distance(other, sigma, dense);
  CHECK(std::abs(dd.d0 - dc.d0) <= 0.05 * dd.d0);
  CHECK(std::abs(dd.total() - dc.total()) <= 0.05 * dd.total());
}

TEST_CASE("positivity margin of the perturbation field") {
  for (int m : {3, 4}) {
    const SphereForm worst = add_forms(round_metric(m), scale_form(0.1, perturbation_field(m)));
    const Atlas& atlas = worst.atlas();
    GridSpec grid;
    grid.per_axis = 7;
    double min_eig = 1e300;
    for (const Chart& c : atlas.charts())
      for (const Vec& x : chart_lattice(atlas, c, grid)) {
        Eigen::SelfAdjointEigenSolver<Mat> es(worst.eval(c, x));
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      }
    CHECK(min_eig > 0.5);
  }
}
