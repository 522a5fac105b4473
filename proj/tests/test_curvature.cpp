#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "gcfib/curvature.hpp"
#include "gcfib/fibration.hpp"
#include "gcfib/linalg.hpp"
#include "gcfib/rng.hpp"

using namespace gcfib;

namespace {

const Vec4 e1{1, 0, 0, 0};
const Vec4 e2{0, 1, 0, 0};
const Vec4 e3{0, 0, 1, 0};
const Vec4 e4{0, 0, 0, 1};

PhiMap random_valid_f(Rng& rng) {
  for (;;) {
    Mat2 f{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    if (eig2_discriminant(f) < -1e-6) return PhiMap::unchecked(f);
  }
}

// index swap (e1 e2) <-> (e3 e4)
int swp(int i) { return i <= 2 ? i + 2 : i - 2; }

}  // namespace

TEST_CASE("pair slots enumerate the bivector basis") {
  CHECK(pair_slot(1, 2) == 0);
  CHECK(pair_slot(1, 3) == 1);
  CHECK(pair_slot(1, 4) == 2);
  CHECK(pair_slot(2, 3) == 3);
  CHECK(pair_slot(2, 4) == 4);
  CHECK(pair_slot(3, 4) == 5);
}

TEST_CASE("hopf tensor components") {
  CurvatureTensor4 r = build_tensor(PhiMap::checked({0, -1, 1, 0}), -1.0, -1.0);
  CHECK(r.component(1, 2, 1, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.component(1, 3, 1, 3) == doctest::Approx(0.0));
  CHECK(r.component(1, 2, 3, 4) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r.component(2, 4, 3, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(r.component(2, 3, 4, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  double cyc = r.component(1, 2, 3, 4) + r.component(2, 3, 1, 4) + r.component(3, 1, 2, 4);
  CHECK(std::fabs(cyc) < 1e-15);
  CHECK(r.bianchi_residual() < 1e-12);
  CHECK(r.kappa_max() == 1.0);
}

TEST_CASE("storage symmetries are exact for every index tuple") {
  Rng rng(401);
  CurvatureTensor4 r = build_tensor(random_valid_f(rng), -0.7, -1.3);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l) {
          double v = r.component(i, j, k, l);
          CHECK(v == r.component(k, l, i, j));
          CHECK(v == -r.component(j, i, k, l));
          CHECK(v == -r.component(i, j, l, k));
        }
  CHECK(r.bianchi_residual() < 1e-12);
}

TEST_CASE("precondition failures") {
  PhiMap f = PhiMap::checked({0, -1, 1, 0});
  CHECK_THROWS_AS(build_tensor(f, 0.5, -1.0), InvalidParams);
  CHECK_THROWS_AS(build_tensor(f, -1.0, 0.0), InvalidParams);
  CHECK_THROWS_AS(build_tensor(PhiMap::unchecked({1, 2, 3, 1}), -1.0, -1.0), RealEigenvalues);
}

TEST_CASE("block swap maps the antidiagonal family to its relabeled form") {
  // for F = [[0,b],[c,0]] and gamma = beta = g, swapping (e1,e2)<->(e3,e4)
  // lands on the tensor of F' = [[0,b],[1/c,0]] with gamma' = g, beta' = c^2 g
  double b = -4.0, c = 2.0, g = -0.5;
  CurvatureTensor4 r = build_tensor(PhiMap::checked({0, b, c, 0}), g, g);
  CurvatureTensor4 want = build_tensor(PhiMap::checked({0, b, 1.0 / c, 0}), g, c * c * g);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l)
          CHECK(std::fabs(r.component(swp(i), swp(j), swp(k), swp(l)) -
                          want.component(i, j, k, l)) < 1e-14);

  // with c = 1 the family is swap invariant outright
  CurvatureTensor4 s = build_tensor(PhiMap::checked({0, -4, 1, 0}), g, g);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l)
          CHECK(std::fabs(s.component(swp(i), swp(j), swp(k), swp(l)) -
                          s.component(i, j, k, l)) < 1e-14);
}

TEST_CASE("sectional curvature on coordinate planes") {
  double gamma = -0.4, beta = -1.7;
  CurvatureTensor4 r = build_tensor(PhiMap::checked({1, -3, 2, -1}), gamma, beta);
  CHECK(sectional(r, e1, e2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sectional(r, e3, e4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sectional(r, e1, e3) == doctest::Approx(1.0 + gamma).epsilon(1e-14));
  CHECK_THROWS_AS(sectional(r, e1, 2.0 * e1), DegeneratePlane);
}

TEST_CASE("sectional curvature only sees the plane") {
  Rng rng(402);
  CurvatureTensor4 r = build_tensor(random_valid_f(rng), -0.9, -0.3);
  for (int i = 0; i < 100; ++i) {
    Vec4 x = rng.unit_vec4();
    Vec4 y = rng.unit_vec4();
    double base = sectional(r, x, y);
    double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    double c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
    if (std::fabs(a * d - b * c) < 0.1) continue;
    Vec4 xx = a * x + b * y;
    Vec4 yy = c * x + d * y;
    CHECK(sectional(r, xx, yy) == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("hopf q-form blocks") {
  QForm q = q_form(build_tensor(PhiMap::checked({0, -1, 1, 0}), -1.0, -1.0));
  // lambda block then h block both -Identity
  CHECK(q.m[0][0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(q.m[1][1] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(q.m[2][2] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(q.m[3][3] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::fabs(q.m[0][1]) < 1e-15);
  CHECK(std::fabs(q.m[2][3]) < 1e-15);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(q.m[i][j] == q.m[j][i]);
}

TEST_CASE("q-form kernel is the graph of the phi map") {
  Rng rng(403);
  for (int rep = 0; rep < 20; ++rep) {
    PhiMap f = random_valid_f(rng);
    double gamma = rng.uniform(-3.0, -0.05);
    double beta = rng.uniform(-3.0, -0.05);
    QForm q = q_form(build_tensor(f, gamma, beta));

    for (int i = 0; i < 5; ++i) {
      double l3 = rng.uniform(-2, 2), l4 = rng.uniform(-2, 2);
      std::array<double, 4> v{l3, l4, f.f.a * l3 + f.f.b * l4, f.f.c * l3 + f.f.d * l4};
      for (int row = 0; row < 4; ++row) {
        double acc = 0.0;
        for (int col = 0; col < 4; ++col) acc += q.m[row][col] * v[col];
        CHECK(std::fabs(acc) < 1e-10);
      }
    }

    SymEig<4> e = sym_eig4(q.m);
    std::array<double, 4> mags{std::fabs(e.values[0]), std::fabs(e.values[1]),
                               std::fabs(e.values[2]), std::fabs(e.values[3])};
    std::sort(mags.begin(), mags.end());
    CHECK(mags[0] < 1e-10);
    CHECK(mags[1] < 1e-10);
    CHECK(mags[2] > 1e-4 * std::min(-gamma, -beta));
  }
}

TEST_CASE("property report passes for built tensors") {
  PropertyReport hopf = verify_r2_r3(
      build_tensor(PhiMap::checked({0, -1, 1, 0}), -1.0, -1.0),
      PhiMap::checked({0, -1, 1, 0}), 10, 11);
  CHECK(hopf.r1);
  CHECK(hopf.r2.ok);
  CHECK(hopf.r2.unique);
  CHECK(hopf.r3.ok);
  CHECK(hopf.all_ok());

  PropertyReport skew = verify_r2_r3(
      build_tensor(PhiMap::checked({1, -3, 2, -1}), -0.5, -2.0),
      PhiMap::checked({1, -3, 2, -1}), 10, 11);
  CHECK(skew.all_ok());
  CHECK(skew.r2.max_excess <= 1e-10);
  CHECK(skew.r2.plane_distance < 1e-6);
  CHECK(skew.r3.max_deviation <= 1e-10);
}

TEST_CASE("a perturbed tensor fails the report") {
  CurvatureTensor4 r = build_tensor(PhiMap::checked({1, -3, 2, -1}), -0.5, -2.0);
  r.set_pair_entry(pair_slot(1, 2), pair_slot(3, 4),
                   r.pair_entry(pair_slot(1, 2), pair_slot(3, 4)) + 0.1);
  PropertyReport rep = verify_r2_r3(r, PhiMap::checked({1, -3, 2, -1}), 10, 11);
  CHECK(!rep.all_ok());
  CHECK(rep.worst_residual > 1e-3);
}

TEST_CASE("recover round trip") {
  Mat2 hopf = recover_fibration(build_tensor(PhiMap::checked({0, -1, 1, 0}), -1, -1)).f;
  CHECK((hopf - Mat2{0, -1, 1, 0}).max_abs() < 1e-12);

  Rng rng(404);
  for (int rep = 0; rep < 100; ++rep) {
    PhiMap f = random_valid_f(rng);
    double gamma = rng.uniform(-3.0, -0.05);
    double beta = rng.uniform(-3.0, -0.05);
    Mat2 back = recover_fibration(build_tensor(f, gamma, beta)).f;
    CHECK((back - f.f).max_abs() < 1e-10);
  }
}

TEST_CASE("recover rejects the round sphere") {
  CurvatureTensor4 round;
  for (int p = 0; p < 6; ++p) round.set_pair_entry(p, p, 1.0);
  CHECK_THROWS_AS(recover_fibration(round), KernelDimension);
}

TEST_CASE("recover rejects a kernel with real eigenvalues") {
  // Q = -(l3-h3)^2 - (l4-h4)^2: kernel is the graph of the identity
  CurvatureTensor4 t;
  t.set_pair_entry(pair_slot(1, 2), pair_slot(1, 2), 1.0);
  t.set_pair_entry(pair_slot(3, 4), pair_slot(3, 4), 1.0);
  t.set_pair_entry(pair_slot(2, 3), pair_slot(1, 3), -1.0);
  t.set_pair_entry(pair_slot(2, 4), pair_slot(1, 4), -1.0);
  CHECK_THROWS_AS(recover_fibration(t), RealEigenvalues);
}
