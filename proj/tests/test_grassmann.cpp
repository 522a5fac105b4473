#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gcfib/fibration.hpp"
#include "gcfib/grassmann.hpp"
#include "gcfib/linalg.hpp"
#include "gcfib/rng.hpp"

using namespace gcfib;

namespace {

GreatCircleFibration special_fib(double a, double b, double c, double d) {
  return GreatCircleFibration::special(PhiMap::checked({a, b, c, d}));
}

SurfacePoint synth(Vec3 minus, Vec3 plus) {
  SurfacePoint p;
  p.xi_minus = normalized(minus);
  p.xi_plus = normalized(plus);
  return p;
}

}  // namespace

TEST_CASE("hopf base surface pins one factor") {
  std::vector<SurfacePoint> pts = base_surface(GreatCircleFibration::hopf(), 200, 1);
  REQUIRE(pts.size() >= 150);
  CHECK(factor_spread(pts, DomainFactor::Plus) < 1e-10);
  CHECK(factor_spread(pts, DomainFactor::Minus) > 1.0);
  for (const SurfacePoint& p : pts) {
    CHECK(norm(p.xi_plus - Vec3{0, 0, 1}) < 1e-10);
    CHECK(norm(p.xi_minus) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("skew base surface moves both factors") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(0, -4, 1, 0), 200, 1);
  REQUIRE(pts.size() >= 150);
  CHECK(factor_spread(pts, DomainFactor::Minus) > 1e-3);
  CHECK(factor_spread(pts, DomainFactor::Plus) > 1e-3);
}

TEST_CASE("base surface points are distinct fibers") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(1, -3, 2, -1), 150, 9);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = i + 1; k < pts.size(); ++k) {
      double dm = sphere_distance(pts[i].xi_minus, pts[k].xi_minus);
      double dp = sphere_distance(pts[i].xi_plus, pts[k].xi_plus);
      CHECK(dm + dp > 1e-8);
    }
}

TEST_CASE("graph domain picks the moving factor for hopf") {
  std::vector<SurfacePoint> pts = base_surface(GreatCircleFibration::hopf(), 100, 2);
  CHECK(graph_domain(pts) == DomainFactor::Minus);
}

TEST_CASE("graph domain succeeds on skew samples") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(0, -4, 1, 0), 300, 2);
  CHECK(graph_domain(pts) == DomainFactor::Minus);

  // mirrored map swaps the roles of the two factors
  std::vector<SurfacePoint> mirror = base_surface(special_fib(0, 4, -1, 0), 300, 2);
  CHECK(graph_domain(mirror) == DomainFactor::Plus);
}

TEST_CASE("graph domain rejects a non-graph sample") {
  std::vector<SurfacePoint> pts;
  pts.push_back(synth({0, 0, 1}, {1, 0, 0}));
  pts.push_back(synth({0, 0, 1}, {0, 1, 0}));  // same minus, far plus
  pts.push_back(synth({1, 0, 0}, {0, 0, 1}));
  pts.push_back(synth({0, 1, 0}, {0, 0, 1}));  // same plus, far minus
  CHECK_THROWS_AS(graph_domain(pts), NotAGraph);
}

TEST_CASE("lipschitz ratio is zero for hopf and below one for skew") {
  std::vector<SurfacePoint> hopf = base_surface(GreatCircleFibration::hopf(), 200, 3);
  LipschitzReport hr = lipschitz_check(hopf);
  CHECK(hr.max_ratio < 1e-10);  // constant image factor up to roundoff
  CHECK(!hr.domain_collapsed);

  std::vector<SurfacePoint> skew = base_surface(special_fib(0, -4, 1, 0), 500, 3);
  LipschitzReport sr = lipschitz_check(skew);
  CHECK(sr.max_ratio <= 1.0 + 1e-6);
  CHECK(sr.max_ratio > 0.1);
  CHECK(sr.witness.first >= 0);
  CHECK(sr.witness.second >= 0);
}

TEST_CASE("lipschitz check flags a stretched synthetic surface") {
  std::vector<SurfacePoint> pts;
  for (int i = 0; i < 8; ++i) {
    double t = 0.15 * i;
    pts.push_back(synth({std::cos(t), std::sin(t), 0}, {std::cos(2 * t), std::sin(2 * t), 0}));
  }
  LipschitzReport r = lipschitz_check(pts, DomainFactor::Minus);
  CHECK(r.max_ratio > 1.9);
}

TEST_CASE("lipschitz check reports a collapsed domain") {
  std::vector<SurfacePoint> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(synth({0, 0, 1}, {1, 0, 0}));
  LipschitzReport r = lipschitz_check(pts, DomainFactor::Minus);
  CHECK(r.domain_collapsed);
  CHECK(r.max_ratio == 0.0);
}

TEST_CASE("gage decomposition of hopf is the zero map") {
  std::vector<SurfacePoint> pts = base_surface(GreatCircleFibration::hopf(), 120, 4);
  GageDecomposition g = gage_decompose(pts);
  CHECK(g.rank == 0);
  CHECK(g.plane_degenerate);
  CHECK(g.fit_residual < 1e-6);
  CHECK(g.l_singular_values[0] < 1e-8);
}

TEST_CASE("gage oracle: one-parameter stretch has rank 1") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(0, -4, 1, 0), 300, 4);
  GageDecomposition g = gage_decompose(pts);
  CHECK(g.domain == DomainFactor::Minus);
  CHECK(g.rank == 1);
  CHECK(g.fit_residual < 1e-10);
  CHECK(g.l_singular_values[0] == doctest::Approx(0.6).epsilon(1e-8));
  CHECK(g.l_singular_values[1] < 1e-8);
  CHECK(operator_norm(g.l) <= 1.0 + 1e-8);
}

TEST_CASE("gage oracle: generic map has rank 2") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(1, -3, 2, -1), 300, 4);
  GageDecomposition g = gage_decompose(pts);
  CHECK(g.rank == 2);
  CHECK(g.fit_residual < 1e-10);
  double s0 = (4.0 + std::sqrt(5.0)) / 11.0;
  double s1 = (4.0 - std::sqrt(5.0)) / 11.0;
  CHECK(g.l_singular_values[0] == doctest::Approx(s0).epsilon(1e-8));
  CHECK(g.l_singular_values[1] == doctest::Approx(s1).epsilon(1e-8));
  CHECK(operator_norm(g.l) <= 1.0 + 1e-8);
}

TEST_CASE("gage oracle: mirrored map fits over the other factor") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(0, 4, -1, 0), 300, 4);
  GageDecomposition g = gage_decompose(pts);
  CHECK(g.domain == DomainFactor::Plus);
  CHECK(g.rank == 1);
  CHECK(g.l_singular_values[0] == doctest::Approx(0.6).epsilon(1e-8));
}

TEST_CASE("gage fit generalizes to held-out points") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(1, -3, 2, -1), 400, 5);
  REQUIRE(pts.size() >= 300);
  std::size_t half = pts.size() / 2;
  std::vector<SurfacePoint> train(pts.begin(), pts.begin() + static_cast<long>(half));
  std::vector<SurfacePoint> held(pts.begin() + static_cast<long>(half), pts.end());
  GageDecomposition g = gage_decompose(train);
  CHECK(gage_rms(g, held) < 1e-6);
}

TEST_CASE("gage image stays inside an open hemisphere") {
  std::vector<SurfacePoint> pts = base_surface(special_fib(1, -3, 2, -1), 300, 6);
  GageDecomposition g = gage_decompose(pts);
  for (const SurfacePoint& p : pts)
    CHECK(dot(factor_point(p, other_factor(g.domain)), g.image_normal) > 0.0);
}

TEST_CASE("ambient rotation acts as a pair of factor rotations") {
  Rng rng(301);
  Mat4 m = rng.random_rotation4();
  AlmostComplexStructure j = phi_to_structure(PhiMap::checked({1, -3, 2, -1}));
  GreatCircleFibration orig = GreatCircleFibration::skew(j);
  GreatCircleFibration rot = GreatCircleFibration::skew(j, m);

  std::vector<BivectorSplit> s0, s1;
  for (int i = 0; i < 40; ++i) {
    Vec4 x = rng.unit_vec4();
    s0.push_back(plucker_split(fiber_through(orig, x)));
    s1.push_back(plucker_split(fiber_through(rot, normalized(m.apply(x)))));
  }
  for (int i = 0; i < 40; ++i)
    for (int k = i + 1; k < 40; ++k) {
      CHECK(std::fabs(sphere_distance(s0[i].xi_minus, s0[k].xi_minus) -
                      sphere_distance(s1[i].xi_minus, s1[k].xi_minus)) < 1e-10);
      CHECK(std::fabs(sphere_distance(s0[i].xi_plus, s0[k].xi_plus) -
                      sphere_distance(s1[i].xi_plus, s1[k].xi_plus)) < 1e-10);
    }
}

TEST_CASE("gage singular values survive an ambient rotation") {
  Rng rng(302);
  Mat4 m = rng.random_rotation4();
  AlmostComplexStructure j = phi_to_structure(PhiMap::checked({1, -3, 2, -1}));
  std::vector<SurfacePoint> pts =
      base_surface(GreatCircleFibration::skew(j, m), 300, 7);
  GageDecomposition g = gage_decompose(pts);
  CHECK(g.fit_residual < 1e-8);
  double s0 = (4.0 + std::sqrt(5.0)) / 11.0;
  double s1 = (4.0 - std::sqrt(5.0)) / 11.0;
  CHECK(g.l_singular_values[0] == doctest::Approx(s0).epsilon(1e-7));
  CHECK(g.l_singular_values[1] == doctest::Approx(s1).epsilon(1e-7));
}

TEST_CASE("rank stratum matches the hopf detection rule") {
  for (const Mat2& f : {Mat2{0, -1, 1, 0}, Mat2{0, -4, 1, 0}, Mat2{1, -3, 2, -1}}) {
    int r = rank_stratum(PhiMap::checked(f));
    std::vector<SurfacePoint> pts =
        base_surface(GreatCircleFibration::special(PhiMap::checked(f)), 200, 8);
    bool constant_factor = factor_spread(pts, DomainFactor::Minus) < 1e-8 ||
                           factor_spread(pts, DomainFactor::Plus) < 1e-8;
    CHECK((r == 0) == constant_factor);
  }
}
