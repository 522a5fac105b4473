#include "gcfib/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcfib {

Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Vec3 normalized(Vec3 a) {
  double n = norm(a);
  if (n == 0.0) throw InvalidParams("cannot normalize zero vector");
  return (1.0 / n) * a;
}

double sphere_distance(Vec3 a, Vec3 b) {
  double chord = norm(a - b);
  return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

Vec4 operator+(Vec4 a, Vec4 b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
Vec4 operator-(Vec4 a, Vec4 b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
Vec4 operator*(double s, Vec4 a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

double dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}
double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

Vec4 normalized(const Vec4& a) {
  double n = norm(a);
  if (n == 0.0) throw InvalidParams("cannot normalize zero vector");
  return (1.0 / n) * a;
}

Mat2 Mat2::inverse() const {
  double dt = det();
  if (dt == 0.0) throw InvalidParams("singular 2x2 matrix");
  double inv = 1.0 / dt;
  return {d * inv, -b * inv, -c * inv, a * inv};
}

double Mat2::max_abs() const {
  return std::max(std::max(std::fabs(a), std::fabs(b)), std::max(std::fabs(c), std::fabs(d)));
}

Mat2 operator*(const Mat2& m, const Mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c,
          m.c * n.b + m.d * n.d};
}

Mat2 operator-(const Mat2& m, const Mat2& n) {
  return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
}

Mat4 Mat4::identity() {
  Mat4 r;
  for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
  return r;
}

Vec4 Mat4::apply(const Vec4& v) const {
  Vec4 r;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

Mat4 Mat4::transpose() const {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Mat4 Mat4::inverse() const {
  Mat4 a = *this;
  Mat4 inv = Mat4::identity();
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    if (std::fabs(a(pivot, col)) < 1e-14 * std::max(1.0, max_abs()))
      throw InvalidParams("singular 4x4 matrix");
    if (pivot != col) {
      for (int j = 0; j < 4; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    double scale = 1.0 / a(col, col);
    for (int j = 0; j < 4; ++j) {
      a(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      double f = a(r, col);
      if (f == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

double Mat4::max_abs() const {
  double r = 0.0;
  for (double x : m) r = std::max(r, std::fabs(x));
  return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat4 operator-(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] =
      a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)];
  return r;
}

namespace {

template <int N>
SymEig<N> jacobi_eig(std::array<std::array<double, N>, N> a) {
  std::array<std::array<double, N>, N> v{};
  for (int i = 0; i < N; ++i) v[i][i] = 1.0;

  double scale = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) scale = std::max(scale, std::fabs(a[i][j]));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-34 * scale * scale) break;
    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        if (std::fabs(a[p][q]) < 1e-300) continue;
        double phi = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
        double c = std::cos(phi), s = std::sin(phi);
        for (int k = 0; k < N; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < N; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, N> order{};
  for (int i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] > a[j][j]; });

  SymEig<N> out;
  for (int i = 0; i < N; ++i) {
    out.values[i] = a[order[i]][order[i]];
    for (int k = 0; k < N; ++k) out.vectors[i][k] = v[k][order[i]];
  }
  return out;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

std::array<double, 2> gram_svd(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2) {
  Mat2 g{dot(a1, b1), dot(a1, b2), dot(a2, b1), dot(a2, b2)};
  return singular_values(g);
}

}  // namespace

SymEig<2> sym_eig2(const std::array<std::array<double, 2>, 2>& m) { return jacobi_eig<2>(m); }
SymEig<3> sym_eig3(const std::array<std::array<double, 3>, 3>& m) { return jacobi_eig<3>(m); }
SymEig<4> sym_eig4(const std::array<std::array<double, 4>, 4>& m) { return jacobi_eig<4>(m); }

double condition_number(const Mat4& m) {
  std::array<std::array<double, 4>, 4> g{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += m(k, i) * m(k, j);
      g[i][j] = s;
    }
  SymEig<4> e = sym_eig4(g);
  double hi = std::sqrt(std::max(0.0, e.values[0]));
  double lo = std::sqrt(std::max(0.0, e.values[3]));
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

OrientedPlane2 gram_schmidt_plane(const Vec4& u, const Vec4& v) {
  double nu = norm(u);
  if (nu < 1e-10 * std::max(1.0, norm(v))) throw DegeneratePlane("first vector is degenerate");
  Vec4 q1 = (1.0 / nu) * u;
  Vec4 w = v - dot(v, q1) * q1;
  double nw = norm(w);
  if (nw <= 1e-10 * std::max(1.0, norm(v)))
    throw DegeneratePlane("vectors are nearly linearly dependent");
  return {q1, (1.0 / nw) * w};
}

OrientedPlane2 plane_complement(const OrientedPlane2& p) {
  // Project coordinate directions onto the complement and keep the first two
  // with a sizeable residual. A trace argument guarantees residual norm >= 0.5
  // for at least two of the four candidates, at each stage.
  Vec4 basis[2];
  int found = 0;
  for (int i = 0; i < 4 && found < 2; ++i) {
    Vec4 e;
    e[i] = 1.0;
    Vec4 w = e - dot(e, p.u) * p.u - dot(e, p.v) * p.v;
    for (int k = 0; k < found; ++k) w = w - dot(w, basis[k]) * basis[k];
    double nw = norm(w);
    if (nw > 0.4) basis[found++] = (1.0 / nw) * w;
  }
  if (found < 2) throw DegeneratePlane("complement construction failed");
  return {basis[0], basis[1]};
}

PrincipalAngles principal_angles(const OrientedPlane2& p, const OrientedPlane2& q) {
  std::array<double, 2> cosines = gram_svd(p.u, p.v, q.u, q.v);
  OrientedPlane2 qc = plane_complement(q);
  std::array<double, 2> sines = gram_svd(p.u, p.v, qc.u, qc.v);
  double c1 = clamp01(cosines[0]), c2 = clamp01(cosines[1]);
  double s1 = clamp01(sines[1]), s2 = clamp01(sines[0]);
  return {std::atan2(s1, c1), std::atan2(s2, c2)};
}

double plane_separation_sv(const OrientedPlane2& p, const OrientedPlane2& q) {
  PrincipalAngles pa = principal_angles(p, q);
  return std::sqrt(2.0) * std::sin(0.5 * pa.alpha_min);
}

bool planes_coincide(const OrientedPlane2& p, const OrientedPlane2& q, double tol) {
  PrincipalAngles pa = principal_angles(p, q);
  return pa.alpha_max < tol;
}

std::array<double, 6> plucker_coordinates(const Vec4& u, const Vec4& v) {
  auto p = [&](int i, int j) { return u[i] * v[j] - u[j] * v[i]; };
  return {p(0, 1), p(0, 2), p(0, 3), p(1, 2), p(1, 3), p(2, 3)};
}

BivectorSplit plucker_split(const OrientedPlane2& p) {
  const double tol = 1e-10;
  if (std::fabs(norm(p.u) - 1.0) > tol || std::fabs(norm(p.v) - 1.0) > tol ||
      std::fabs(dot(p.u, p.v)) > tol)
    throw DegeneratePlane("plane basis is not orthonormal");

  std::array<double, 6> pc = plucker_coordinates(p.u, p.v);
  double p12 = pc[0], p13 = pc[1], p14 = pc[2], p23 = pc[3], p24 = pc[4], p34 = pc[5];
  double p31 = -p13;

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Vec3 minus_part = inv_sqrt2 * Vec3{p23 - p14, p31 - p24, p12 - p34};
  Vec3 plus_part = inv_sqrt2 * Vec3{p23 + p14, p31 + p24, p12 + p34};

  double nm = norm(minus_part), np = norm(plus_part);
  if (std::fabs(nm - inv_sqrt2) > tol || std::fabs(np - inv_sqrt2) > tol)
    throw DegeneratePlane("bivector parts have unexpected norm");

  return {(1.0 / nm) * minus_part, (1.0 / np) * plus_part};
}

double eig2_discriminant(const Mat2& f) {
  return (f.a - f.d) * (f.a - f.d) + 4.0 * f.b * f.c;
}

std::array<double, 2> singular_values(const Mat2& f) {
  double e = 0.5 * (f.a + f.d);
  double h = 0.5 * (f.a - f.d);
  double g = 0.5 * (f.b + f.c);
  double k = 0.5 * (f.c - f.b);
  double q = std::sqrt(e * e + k * k);
  double r = std::sqrt(h * h + g * g);
  return {q + r, std::fabs(q - r)};
}

double operator_norm(const Mat2& f) { return singular_values(f)[0]; }

}  // namespace gcfib
