#include "gcfib/rng.hpp"

#include <cmath>

namespace gcfib {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // Warm up so that small seeds decorrelate.
  next_u64();
  next_u64();
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : state_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {
  next_u64();
  next_u64();
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Vec3 Rng::unit_vec3() {
  for (;;) {
    Vec3 v{normal(), normal(), normal()};
    double n = norm(v);
    if (n > 1e-8) return (1.0 / n) * v;
  }
}

Vec4 Rng::unit_vec4() {
  for (;;) {
    Vec4 v{normal(), normal(), normal(), normal()};
    double n = norm(v);
    if (n > 1e-8) return (1.0 / n) * v;
  }
}

Mat4 Rng::random_rotation4() {
  // QR of a Gaussian matrix with the R diagonal made positive, det fixed to +1.
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = normal();

  Mat4 q;
  Vec4 cols[4];
  for (int j = 0; j < 4; ++j) {
    Vec4 v{a(0, j), a(1, j), a(2, j), a(3, j)};
    for (int k = 0; k < j; ++k) v = v - dot(v, cols[k]) * cols[k];
    double n = norm(v);
    if (n < 1e-10) return random_rotation4();
    cols[j] = (1.0 / n) * v;
  }
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) q(i, j) = cols[j][i];

  // det of an orthogonal matrix is +-1; flip one column if needed.
  double det = 0.0;
  {
    Mat4 t = q;
    det = 1.0;
    for (int col = 0; col < 4; ++col) {
      int pivot = col;
      for (int r = col + 1; r < 4; ++r)
        if (std::fabs(t(r, col)) > std::fabs(t(pivot, col))) pivot = r;
      if (pivot != col) {
        for (int c2 = 0; c2 < 4; ++c2) std::swap(t(pivot, c2), t(col, c2));
        det = -det;
      }
      det *= t(col, col);
      for (int r = col + 1; r < 4; ++r) {
        double f = t(r, col) / t(col, col);
        for (int c2 = col; c2 < 4; ++c2) t(r, c2) -= f * t(col, c2);
      }
    }
  }
  if (det < 0.0)
    for (int i = 0; i < 4; ++i) q(i, 3) = -q(i, 3);
  return q;
}

Vec4 s3_lattice_point(int i, int n) {
  // Hopf-coordinate lattice: pick the torus angles along a Kronecker sequence
  // (plastic-number steps) and thread eta through the area measure.
  const double g = 1.32471795724474602596;
  const double a1 = 1.0 / g;
  const double a2 = 1.0 / (g * g);
  double u = (i + 0.5) / n;
  double eta = std::asin(std::sqrt(u));
  double t1 = 6.283185307179586476925286766559 * std::fmod(0.5 + a1 * (i + 1), 1.0);
  double t2 = 6.283185307179586476925286766559 * std::fmod(0.5 + a2 * (i + 1), 1.0);
  double c = std::cos(eta), s = std::sin(eta);
  return Vec4{c * std::cos(t1), c * std::sin(t1), s * std::cos(t2), s * std::sin(t2)};
}

}  // namespace gcfib
