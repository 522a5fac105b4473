#include "gcfib/curvature.hpp"

#include <cmath>

#include "gcfib/rng.hpp"

namespace gcfib {

int pair_slot(int i, int j) {
  for (int s = 0; s < 6; ++s)
    if (kPairIndex[static_cast<std::size_t>(s)].first == i &&
        kPairIndex[static_cast<std::size_t>(s)].second == j)
      return s;
  throw InvalidParams("not an ordered index pair");
}

double CurvatureTensor4::component(int i, int j, int k, int l) const {
  if (i < 1 || i > 4 || j < 1 || j > 4 || k < 1 || k > 4 || l < 1 || l > 4)
    throw InvalidParams("tensor index out of range");
  if (i == j || k == l) return 0.0;
  double sign = 1.0;
  if (i > j) {
    std::swap(i, j);
    sign = -sign;
  }
  if (k > l) {
    std::swap(k, l);
    sign = -sign;
  }
  return sign * pair_entry(pair_slot(i, j), pair_slot(k, l));
}

double CurvatureTensor4::bianchi_residual() const {
  double worst = 0.0;
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      for (int k = 1; k <= 4; ++k)
        for (int l = 1; l <= 4; ++l) {
          double s = component(i, j, k, l) + component(k, i, j, l) + component(j, k, i, l);
          worst = std::max(worst, std::fabs(s));
        }
  return worst;
}

CurvatureTensor4 build_tensor(const PhiMap& f, double gamma, double beta) {
  if (!(gamma < 0.0) || !(beta < 0.0)) throw InvalidParams("gamma and beta must be negative");
  if (eig2_discriminant(f.f) >= -1e-12)
    throw RealEigenvalues("phi map has (numerically) real eigenvalues");
  double a = f.f.a, b = f.f.b, c = f.f.c, d = f.f.d;

  CurvatureTensor4 r;
  auto set = [&](int i, int j, int k, int l, double v) {
    r.set_pair_entry(pair_slot(i, j), pair_slot(k, l), v);
  };
  set(1, 2, 1, 2, 1.0);
  set(3, 4, 3, 4, 1.0);
  set(1, 3, 1, 3, 1.0 + gamma);
  set(1, 4, 1, 4, 1.0 + beta);
  set(2, 3, 2, 3, 1.0 + a * a * gamma + c * c * beta);
  set(2, 4, 2, 4, 1.0 + b * b * gamma + d * d * beta);
  set(1, 3, 2, 3, a * gamma);
  set(1, 4, 2, 4, d * beta);
  set(2, 3, 2, 4, a * b * gamma + c * d * beta);
  set(1, 2, 3, 4, (b * gamma - c * beta) / 3.0);
  set(1, 3, 2, 4, (2.0 * b * gamma + c * beta) / 3.0);
  set(1, 4, 2, 3, (2.0 * c * beta + b * gamma) / 3.0);

  if (r.bianchi_residual() > 1e-12)
    throw BianchiViolation("constructed tensor violates the first Bianchi identity");
  return r;
}

double sectional(const CurvatureTensor4& r, const Vec4& x, const Vec4& y) {
  double denom = dot(x, x) * dot(y, y) - dot(x, y) * dot(x, y);
  if (denom <= 1e-12) throw DegeneratePlane("directions are (nearly) dependent");
  double num = 0.0;
  // R(x,y,x,y) through bivector coordinates of x ^ y.
  std::array<double, 6> w = plucker_coordinates(x, y);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q)
      num += w[static_cast<std::size_t>(p)] * w[static_cast<std::size_t>(q)] * r.pair_entry(p, q);
  return num / denom;
}

QForm q_form(const CurvatureTensor4& r) {
  QForm q;
  auto& m = q.m;
  m[0][0] = r.component(2, 3, 2, 3) - 1.0;
  m[0][1] = r.component(2, 3, 2, 4);
  m[1][1] = r.component(2, 4, 2, 4) - 1.0;
  m[2][2] = r.component(1, 3, 1, 3) - 1.0;
  m[2][3] = r.component(1, 3, 1, 4);
  m[3][3] = r.component(1, 4, 1, 4) - 1.0;
  for (int i = 3; i <= 4; ++i)
    for (int j = 3; j <= 4; ++j)
      m[static_cast<std::size_t>(i - 3)][static_cast<std::size_t>(j - 1)] =
          r.component(1, 2, i, j) + r.component(2, i, j, 1);
  m[1][0] = m[0][1];
  m[3][2] = m[2][3];
  for (int i = 0; i < 2; ++i)
    for (int j = 2; j < 4; ++j)
      m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return q;
}

namespace {

std::array<Vec4, 3> orthonormal_complement(const Vec4& x) {
  std::array<Vec4, 3> t{};
  int found = 0;
  for (int i = 0; i < 4 && found < 3; ++i) {
    Vec4 e;
    e[i] = 1.0;
    Vec4 w = e - dot(e, x) * x;
    for (int k = 0; k < found; ++k)
      w = w - dot(w, t[static_cast<std::size_t>(k)]) * t[static_cast<std::size_t>(k)];
    double n = norm(w);
    if (n > 0.3) t[static_cast<std::size_t>(found++)] = (1.0 / n) * w;
  }
  if (found < 3)
    for (int i = 0; i < 4 && found < 3; ++i) {
      Vec4 e;
      e[i] = 1.0;
      Vec4 w = e - dot(e, x) * x;
      for (int k = 0; k < found; ++k)
        w = w - dot(w, t[static_cast<std::size_t>(k)]) * t[static_cast<std::size_t>(k)];
      double n = norm(w);
      if (n > 1e-3) t[static_cast<std::size_t>(found++)] = (1.0 / n) * w;
    }
  return t;
}

struct Quad3 {
  std::array<std::array<double, 3>, 3> b{};

  double value(const Vec3& v) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        s += v[i] * b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[j];
    return s;
  }
  Vec3 apply(const Vec3& v) const {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r[i] += b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[j];
    return r;
  }
};

// Jacobi-type quadratic form y -> R(x,y,x,y) restricted to an orthonormal
// basis of the complement of x.
Quad3 restricted_form(const CurvatureTensor4& r, const Vec4& x, const std::array<Vec4, 3>& t) {
  // K[j][l] = sum_{i,k} x_i x_k R_{i j k l} over the ambient basis.
  std::array<std::array<double, 4>, 4> k4{};
  for (int j = 1; j <= 4; ++j)
    for (int l = j; l <= 4; ++l) {
      double s = 0.0;
      for (int i = 1; i <= 4; ++i)
        for (int k = 1; k <= 4; ++k) {
          double xi = x[i - 1], xk = x[k - 1];
          if (xi == 0.0 || xk == 0.0) continue;
          s += xi * xk * r.component(i, j, k, l);
        }
      k4[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(l - 1)] = s;
      k4[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(j - 1)] = s;
    }
  Quad3 q;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l)
          s += t[static_cast<std::size_t>(a)][j] *
               k4[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] *
               t[static_cast<std::size_t>(b)][l];
      q.b[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
    }
  return q;
}

// Maximizes the quadratic form over the unit sphere: gradient ascent from the
// given start, then Rayleigh-quotient polish for the last digits.
Vec3 ascend(const Quad3& q, Vec3 v) {
  v = normalized(v);
  double f = q.value(v);
  double eta = 0.1;
  for (int iter = 0; iter < 2000 && eta > 1e-14; ++iter) {
    Vec3 g = q.apply(v) - f * v;
    if (norm(g) < 1e-13) break;
    Vec3 cand = normalized(v + (2.0 * eta) * g);
    double fc = q.value(cand);
    if (fc > f) {
      v = cand;
      f = fc;
      eta *= 1.4;
    } else {
      eta *= 0.5;
    }
  }
  for (int iter = 0; iter < 50; ++iter) {
    double mu = q.value(v);
    // Solve (B - mu I) w = v; a singular system means v is converged.
    std::array<std::array<double, 4>, 3> aug{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j)
        aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            q.b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - (i == j ? mu : 0.0);
      aug[static_cast<std::size_t>(i)][3] = v[i];
    }
    bool singular = false;
    for (int col = 0; col < 3 && !singular; ++col) {
      int pivot = col;
      for (int rr = col + 1; rr < 3; ++rr)
        if (std::fabs(aug[static_cast<std::size_t>(rr)][static_cast<std::size_t>(col)]) >
            std::fabs(aug[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
          pivot = rr;
      if (std::fabs(aug[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]) < 1e-14) {
        singular = true;
        break;
      }
      std::swap(aug[static_cast<std::size_t>(pivot)], aug[static_cast<std::size_t>(col)]);
      for (int rr = col + 1; rr < 3; ++rr) {
        double fac = aug[static_cast<std::size_t>(rr)][static_cast<std::size_t>(col)] /
                     aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int cc = col; cc < 4; ++cc)
          aug[static_cast<std::size_t>(rr)][static_cast<std::size_t>(cc)] -=
              fac * aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(cc)];
      }
    }
    if (singular) break;
    Vec3 w;
    for (int i = 2; i >= 0; --i) {
      double s = aug[static_cast<std::size_t>(i)][3];
      for (int j = i + 1; j < 3; ++j)
        s -= aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * w[j];
      w[i] = s / aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    Vec3 cand = normalized(w);
    if (q.value(cand) < f - 1e-12) break;  // polish must not descend
    double delta = std::min(norm(cand - v), norm(cand + v));
    v = cand;
    f = q.value(v);
    if (delta < 1e-14) break;
  }
  return v;
}

}  // namespace

PropertyReport verify_r2_r3(const CurvatureTensor4& r, const PhiMap& f, int samples,
                            std::uint64_t seed) {
  if (samples < 1) throw InvalidParams("samples must be positive");
  PropertyReport rep;
  rep.bianchi_residual = r.bianchi_residual();
  rep.r1 = rep.bianchi_residual <= 1e-12;

  const double kappa = r.kappa_max();

  // R3: curvature on fiber planes, evaluated on random rotated bases.
  double worst_dev = 0.0;
  for (int s = 0; s < samples; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    double l3 = rng.uniform(-3.0, 3.0), l4 = rng.uniform(-3.0, 3.0);
    OrientedPlane2 plane = phi_fiber(f, l3, l4);
    double theta = rng.uniform(0.0, 6.283185307179586);
    Vec4 x = std::cos(theta) * plane.u + std::sin(theta) * plane.v;
    Vec4 y = -std::sin(theta) * plane.u + std::cos(theta) * plane.v;
    worst_dev = std::max(worst_dev, std::fabs(sectional(r, x, y) - kappa));
  }
  rep.r3.max_deviation = worst_dev;
  rep.r3.ok = worst_dev <= 1e-10;

  // R2: the best plane through x must be the fiber plane, uniquely.
  Mat4 structure = phi_to_structure(f).j;
  double worst_excess = -1e300, worst_plane = 0.0;
  bool unique = true;
  for (int s = 0; s < samples; ++s) {
    Rng rng(seed ^ 0x51e2a7b3c9d05e77ULL, static_cast<std::uint64_t>(s));
    double l3 = rng.uniform(-2.0, 2.0), l4 = rng.uniform(-2.0, 2.0);
    Vec4 x = normalized(Vec4{1.0, 0.0, l3, l4});
    std::array<Vec4, 3> t = orthonormal_complement(x);
    Quad3 q = restricted_form(r, x, t);

    // 1-degree grid prescan (the ascent closes the rest), two starts.
    const double step = 3.14159265358979323846 / 180.0;
    Vec3 best1{0, 0, 1}, best2{1, 0, 0};
    double f1 = -1e300, f2 = -1e300;
    for (int a = 0; a <= 180; ++a)
      for (int b = 0; b < 360; ++b) {
        double th = a * step, ph = b * step;
        Vec3 v{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        double val = q.value(v);
        if (val > f1) {
          double sep = std::min(norm(v - best1), norm(v + best1));
          if (sep > 0.3) {
            best2 = best1;
            f2 = f1;
          }
          best1 = v;
          f1 = val;
        } else if (val > f2) {
          double sep = std::min(norm(v - best1), norm(v + best1));
          if (sep > 0.3) {
            best2 = v;
            f2 = val;
          }
        }
      }
    Vec3 v1 = ascend(q, best1);
    Vec3 v2 = ascend(q, best2);
    double val1 = q.value(v1), val2 = q.value(v2);
    Vec3 top = val1 >= val2 ? v1 : v2;

    Vec4 y{};
    for (int i = 0; i < 4; ++i)
      y[i] = top.x * t[0][i] + top.y * t[1][i] + top.z * t[2][i];
    OrientedPlane2 max_plane = gram_schmidt_plane(x, y);
    OrientedPlane2 fiber = gram_schmidt_plane(x, structure.apply(x));

    double excess = std::max(val1, val2) - kappa;
    worst_excess = std::max(worst_excess, excess);
    worst_plane = std::max(worst_plane, principal_angles(max_plane, fiber).alpha_max);

    Vec4 y2{};
    Vec3 other = val1 >= val2 ? v2 : v1;
    for (int i = 0; i < 4; ++i)
      y2[i] = other.x * t[0][i] + other.y * t[1][i] + other.z * t[2][i];
    OrientedPlane2 other_plane = gram_schmidt_plane(x, y2);
    if (!planes_coincide(max_plane, other_plane, 1e-6)) unique = false;
  }
  rep.r2.max_excess = worst_excess;
  rep.r2.plane_distance = worst_plane;
  rep.r2.unique = unique;
  rep.r2.ok = unique && worst_excess <= 1e-10 && worst_plane < 1e-6;

  rep.worst_residual = std::max(
      {rep.bianchi_residual, rep.r3.max_deviation, std::max(0.0, rep.r2.max_excess),
       rep.r2.plane_distance});
  return rep;
}

PhiMap recover_fibration(const CurvatureTensor4& r) {
  QForm q = q_form(r);
  SymEig<4> eig = sym_eig4(q.m);
  std::array<int, 4> idx{0, 1, 2, 3};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::fabs(eig.values[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])]) <
          std::fabs(eig.values[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]))
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);

  double small = std::fabs(eig.values[static_cast<std::size_t>(idx[1])]);
  double large = std::fabs(eig.values[static_cast<std::size_t>(idx[2])]);
  if (small >= 1e-8 || large <= 1e-4)
    throw KernelDimension("quadratic form kernel is not 2-dimensional");

  const auto& k1 = eig.vectors[static_cast<std::size_t>(idx[0])];
  const auto& k2 = eig.vectors[static_cast<std::size_t>(idx[1])];
  Mat2 lam{k1[0], k2[0], k1[1], k2[1]};
  Mat2 h{k1[2], k2[2], k1[3], k2[3]};
  if (std::fabs(lam.det()) < 1e-8)
    throw KernelDimension("kernel does not project onto the lambda plane");
  return PhiMap::checked(h * lam.inverse());
}

}  // namespace gcfib
