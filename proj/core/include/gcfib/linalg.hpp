#pragma once

#include <array>
#include <cstddef>

#include "gcfib/errors.hpp"

namespace gcfib {

struct Vec2 {
  double x{}, y{};

  double& operator[](int i) { return i == 0 ? x : y; }
  double operator[](int i) const { return i == 0 ? x : y; }
};

struct Vec3 {
  double x{}, y{}, z{};

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

struct Vec4 {
  std::array<double, 4> c{};

  Vec4() = default;
  Vec4(double a, double b, double d, double e) : c{a, b, d, e} {}

  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

Vec2 operator+(Vec2 a, Vec2 b);
Vec2 operator-(Vec2 a, Vec2 b);
Vec2 operator*(double s, Vec2 a);
double dot(Vec2 a, Vec2 b);
double norm(Vec2 a);

Vec3 operator+(Vec3 a, Vec3 b);
Vec3 operator-(Vec3 a, Vec3 b);
Vec3 operator*(double s, Vec3 a);
double dot(Vec3 a, Vec3 b);
double norm(Vec3 a);
Vec3 cross(Vec3 a, Vec3 b);
Vec3 normalized(Vec3 a);
// Arc distance on the unit sphere, via the chord so that small distances keep
// full relative accuracy.
double sphere_distance(Vec3 a, Vec3 b);

Vec4 operator+(Vec4 a, Vec4 b);
Vec4 operator-(Vec4 a, Vec4 b);
Vec4 operator*(double s, Vec4 a);
double dot(const Vec4& a, const Vec4& b);
double norm(const Vec4& a);
Vec4 normalized(const Vec4& a);

struct Mat2 {
  double a{}, b{}, c{}, d{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Mat2 inverse() const;
  Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  double max_abs() const;
};

Mat2 operator*(const Mat2& m, const Mat2& n);
Mat2 operator-(const Mat2& m, const Mat2& n);

struct Mat4 {
  std::array<double, 16> m{};

  static Mat4 identity();
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 4 + c)]; }
  double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 4 + c)]; }
  Vec4 apply(const Vec4& v) const;
  Mat4 transpose() const;
  Mat4 inverse() const;  // Gauss-Jordan with partial pivoting
  double max_abs() const;
};

Mat4 operator*(const Mat4& a, const Mat4& b);
Mat4 operator-(const Mat4& a, const Mat4& b);

// Ratio of extreme singular values.
double condition_number(const Mat4& m);

// Oriented 2-plane in R^4 held as an ordered orthonormal basis (u, v).
struct OrientedPlane2 {
  Vec4 u{}, v{};
};

// Orthonormalizes (u, v) in order. Throws DegeneratePlane when the residual of
// v against the line through u falls below 1e-10 (relative to |v|).
OrientedPlane2 gram_schmidt_plane(const Vec4& u, const Vec4& v);

struct PrincipalAngles {
  double alpha_min{}, alpha_max{};  // radians, in [0, pi/2]
};

// Principal angles between two oriented planes. Cosines come from the SVD of
// the 2x2 Gram matrix; sines from the Gram matrix against the orthogonal
// complement, so angles near 0 are as accurate as angles near pi/2.
PrincipalAngles principal_angles(const OrientedPlane2& p, const OrientedPlane2& q);

// Orthonormal basis of the orthogonal complement of a plane.
OrientedPlane2 plane_complement(const OrientedPlane2& p);

// Smallest singular value of the 4x4 matrix [u1 v1 u2 v2]; zero exactly when
// the planes share a direction. Equals sqrt(2)*sin(alpha_min/2).
double plane_separation_sv(const OrientedPlane2& p, const OrientedPlane2& q);

// Whether two planes are equal as subspaces within an angular tolerance.
bool planes_coincide(const OrientedPlane2& p, const OrientedPlane2& q, double tol);

// Decomposition of the plane's Pluecker coordinates into the self-dual and
// anti-self-dual parts, each rescaled to a unit 3-vector.
struct BivectorSplit {
  Vec3 xi_minus{}, xi_plus{};
};

// Raw Pluecker coordinates (p12, p13, p14, p23, p24, p34) of u ^ v.
std::array<double, 6> plucker_coordinates(const Vec4& u, const Vec4& v);

// Splits a fiber plane into its two unit S^2 factors. Requires an orthonormal
// basis (checked, DegeneratePlane otherwise). Orientation fixed so that
// span(e1,e2) maps to the north pole in both factors.
BivectorSplit plucker_split(const OrientedPlane2& p);

// Discriminant (a-d)^2 + 4bc of a 2x2 matrix; negative exactly when the
// eigenvalues form a complex conjugate pair.
double eig2_discriminant(const Mat2& f);

// Singular values of a 2x2 matrix, descending.
std::array<double, 2> singular_values(const Mat2& f);
double operator_norm(const Mat2& f);

// Eigen decomposition of a small symmetric matrix by cyclic Jacobi rotations.
// Eigenvalues descending; vectors[i] is the eigenvector for values[i].
template <int N>
struct SymEig {
  std::array<double, N> values{};
  std::array<std::array<double, N>, N> vectors{};
};

SymEig<2> sym_eig2(const std::array<std::array<double, 2>, 2>& m);
SymEig<3> sym_eig3(const std::array<std::array<double, 3>, 3>& m);
SymEig<4> sym_eig4(const std::array<std::array<double, 4>, 4>& m);

}  // namespace gcfib
