#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcfib/quadrature.hpp"
#include "gcfib/rng.hpp"
#include "gcfib/volume.hpp"

using namespace gcfib;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

const QuadratureConfig kLight{16, 8, 1e-9};

}  // namespace

TEST_CASE("model params validation") {
  CHECK_NOTHROW(ModelSpaceParams::checked(1, 5));
  CHECK_NOTHROW(ModelSpaceParams::checked(8, 2));
  CHECK_THROWS_AS(ModelSpaceParams::checked(3, 2), InvalidParams);
  CHECK_THROWS_AS(ModelSpaceParams::checked(8, 3), InvalidParams);
  CHECK_THROWS_AS(ModelSpaceParams::checked(2, 0), InvalidParams);
  CHECK(ModelSpaceParams::checked(4, 3).dim() == 12);
}

TEST_CASE("volume form special values") {
  ModelSpaceParams sphere = ModelSpaceParams::checked(1, 2);
  for (double t : {0.2, 0.9, 2.1}) {
    CHECK(model_volume_form(sphere, t) == doctest::Approx(std::sin(t)).epsilon(1e-14));
  }

  // M_PI_2 is not an exact machine half-pi zero, so allow sin(pi) roundoff
  ModelSpaceParams cp2 = ModelSpaceParams::checked(2, 2);
  CHECK(model_volume_form(cp2, M_PI_2) < 1e-15);

  CHECK(jacobi_fiber_factor(2, M_PI_4) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(jacobi_fiber_factor(4, M_PI_2) < 1e-47);
  CHECK(jacobi_fiber_factor(8, M_PI_2) < 1e-100);
  CHECK(jacobi_fiber_factor(1, 0.77) == 1.0);
}

TEST_CASE("volume form reflection symmetry") {
  for (int a : {1, 2, 4}) {
    ModelSpaceParams p = ModelSpaceParams::checked(a, 2);
    for (int i = 0; i < 1000; ++i) {
      double t = M_PI * (i + 0.5) / 1000.0;
      CHECK(std::fabs(model_volume_form(p, t) - model_volume_form(p, M_PI - t)) < 1e-14);
    }
  }
}

TEST_CASE("beta closed forms") {
  for (int n = 1; n <= 7; ++n) {
    ModelSpaceParams p = ModelSpaceParams::checked(2, n);
    CHECK(beta_closed_form(p) == doctest::Approx(M_PI / (2.0 * n)).epsilon(1e-14));
  }
  for (int n = 1; n <= 3; ++n) {
    ModelSpaceParams p = ModelSpaceParams::checked(4, n);
    CHECK(beta_closed_form(p) ==
          doctest::Approx((M_PI / 2.0) / (2.0 * n * (2.0 * n + 1.0))).epsilon(1e-14));
  }
  CHECK(beta_closed_form(ModelSpaceParams::checked(8, 2)) ==
        doctest::Approx(M_PI / 2640.0).epsilon(1e-14));
  CHECK(beta_closed_form(ModelSpaceParams::checked(1, 2)) ==
        doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("quadrature reproduces the closed form") {
  for (auto [a, n] : {std::pair{1, 2}, {2, 1}, {2, 7}, {4, 2}, {8, 2}}) {
    ModelSpaceParams p = ModelSpaceParams::checked(a, n);
    double quad = beta_quadrature(p, {});
    double closed = beta_closed_form(p);
    CHECK(std::fabs(quad - closed) / closed < 1e-8);
  }
  CHECK(beta_quadrature(ModelSpaceParams::checked(2, 1), {}) ==
        doctest::Approx(M_PI_2).epsilon(1e-10));
}

TEST_CASE("quadrature error shrinks as panels double") {
  ModelSpaceParams p = ModelSpaceParams::checked(4, 2);
  double closed = beta_closed_form(p);
  double prev_err = HUGE_VAL;
  for (int panels : {4, 8, 16, 32}) {
    double err = std::fabs(beta_quadrature(p, {panels, 8, 1.0}) - closed);
    CHECK(err <= prev_err + 1e-13);
    prev_err = err;
  }
}

TEST_CASE("pathological quadrature config refuses to converge") {
  CHECK_THROWS_AS(beta_quadrature(ModelSpaceParams::checked(8, 2), {1, 2, 1e-15}),
                  NoConvergence);
}

TEST_CASE("sphere volumes") {
  CHECK(sphere_volume(1) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_volume(2) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(sphere_volume(3) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("cross volumes hit the factorial forms") {
  CHECK(cross_volume(ModelSpaceParams::checked(2, 1)) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(cross_volume(ModelSpaceParams::checked(2, 2)) ==
        doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-12));
  CHECK(cross_volume(ModelSpaceParams::checked(4, 2)) ==
        doctest::Approx(std::pow(M_PI, 4) / 120.0).epsilon(1e-12));

  for (int n = 1; n <= 7; ++n) {
    double want = std::pow(M_PI, n) / factorial(n);
    double got = cross_volume(ModelSpaceParams::checked(2, n));
    CHECK(std::fabs(got - want) / want < 1e-10);
  }
  for (int n = 1; n <= 3; ++n) {
    double want = std::pow(M_PI, 2 * n) / factorial(2 * n + 1);
    double got = cross_volume(ModelSpaceParams::checked(4, n));
    CHECK(std::fabs(got - want) / want < 1e-10);
  }
  double want82 = 6.0 * std::pow(M_PI, 8) / factorial(11);
  double got82 = cross_volume(ModelSpaceParams::checked(8, 2));
  CHECK(std::fabs(got82 - want82) / want82 < 1e-10);
}

TEST_CASE("beta ties the volumes together") {
  for (auto [a, n] : {std::pair{2, 1}, {2, 5}, {4, 2}, {8, 2}}) {
    ModelSpaceParams p = ModelSpaceParams::checked(a, n);
    double lhs = beta_closed_form(p);
    double rhs = M_PI * cross_volume(p) / sphere_volume(p.dim() - 1);
    CHECK(std::fabs(lhs - rhs) / lhs < 1e-10);
  }
}

TEST_CASE("volume identity residual") {
  for (auto [a, n] : {std::pair{2, 1}, {4, 2}, {8, 2}}) {
    CHECK(lemma27_residual(ModelSpaceParams::checked(a, n), {}) < 1e-8);
  }
}

TEST_CASE("holder equality for the sine profile") {
  for (auto [a, n] : {std::pair{2, 2}, {4, 2}, {8, 2}}) {
    CHECK(holder_equality_residual(ModelSpaceParams::checked(a, n), {}) < 1e-6);
  }
  CHECK_THROWS_AS(holder_equality_residual(ModelSpaceParams::checked(2, 1), {}),
                  InvalidParams);
  CHECK_THROWS_AS(holder_equality_residual(ModelSpaceParams::checked(1, 2), {}),
                  InvalidParams);
}

TEST_CASE("perturbed profiles sit strictly above the bound") {
  ModelSpaceParams p = ModelSpaceParams::checked(2, 2);
  HolderSides eq = holder_sides(p, kLight, [](double t) { return std::sin(t); });
  CHECK(std::fabs(eq.lhs - eq.bound) / eq.bound < 1e-6);

  HolderSides pert = holder_sides(p, kLight, [](double t) {
    double s = std::sin(t);
    return s * (1.0 + 0.1 * s * s);
  });
  CHECK(pert.lhs > pert.bound * (1.0 + 1e-6));

  Rng rng(501);
  for (int i = 0; i < 50; ++i) {
    double c1 = rng.uniform(0.0, 0.5);
    double c2 = rng.uniform(0.0, 0.5);
    HolderSides h = holder_sides(p, kLight, [&](double t) {
      double s = std::sin(t);
      return s * (1.0 + c1 * s * s + c2 * s * s * s * s);
    });
    CHECK(h.lhs >= h.bound - 1e-9);
  }
}

TEST_CASE("berger arithmetic") {
  BergerMetricReport round = berger_report(1.0);
  CHECK(round.k_min == 1.0);
  CHECK(round.k_max == 1.0);
  CHECK(round.pinch == 1.0);
  CHECK(!round.inj_less_than_bound);

  BergerMetricReport r = berger_report(0.3);
  CHECK(r.k_min == doctest::Approx(0.09).epsilon(1e-14));
  CHECK(r.k_max == doctest::Approx(3.73).epsilon(1e-14));
  CHECK(std::fabs(r.pinch - 0.09 / 3.73) < 1e-12);
  CHECK(r.fiber_length == doctest::Approx(0.6 * M_PI).epsilon(1e-14));
  CHECK(r.inj_less_than_bound);

  double s_cross = 1.0 / std::sqrt(3.0);
  CHECK(berger_report(s_cross - 1e-6).inj_less_than_bound);
  CHECK(!berger_report(s_cross + 1e-6).inj_less_than_bound);

  CHECK_THROWS_AS(berger_report(0.0), InvalidParams);
  CHECK_THROWS_AS(berger_report(1.5), InvalidParams);
}

TEST_CASE("plain integrator sanity") {
  double s = integrate([](double t) { return std::sin(t); }, {0.0, M_PI}, 8, 8);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));

  double split = integrate([](double t) { return std::fabs(t - 1.0); }, {0.0, 1.0, 2.0}, 4, 6);
  CHECK(split == doctest::Approx(1.0).epsilon(1e-14));
}
