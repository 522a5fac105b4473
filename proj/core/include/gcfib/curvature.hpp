#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "gcfib/fibration.hpp"
#include "gcfib/linalg.hpp"

namespace gcfib {

// Bivector coordinate order: e12, e13, e14, e23, e24, e34.
inline constexpr std::array<std::pair<int, int>, 6> kPairIndex = {
    {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};

// Slot of the ordered pair (i, j), i < j, 1-based indices.
int pair_slot(int i, int j);

// Algebraic curvature tensor on R^4 stored as a symmetric 6x6 matrix over
// bivector coordinates, so the pair symmetries hold exactly by construction.
class CurvatureTensor4 {
 public:
  double pair_entry(int p, int q) const {
    return m_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
  }
  void set_pair_entry(int p, int q, double v) {
    m_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = v;
    m_[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = v;
  }

  // R(e_i, e_j, e_k, e_l), 1-based, with antisymmetry signs applied.
  double component(int i, int j, int k, int l) const;

  // Max over all index 4-tuples of the first Bianchi cyclic sum.
  double bianchi_residual() const;

  double kappa_max() const { return kappa_max_; }

 private:
  std::array<std::array<double, 6>, 6> m_{};
  double kappa_max_ = 1.0;
};

// Curvature tensor pinned to a fibration: fiber planes get curvature 1 and
// every other plane less. Requires gamma < 0, beta < 0 and a valid phi map.
CurvatureTensor4 build_tensor(const PhiMap& f, double gamma, double beta);

// R(x,y,x,y) / (|x|^2 |y|^2 - <x,y>^2); DegeneratePlane when the denominator
// is below 1e-12.
double sectional(const CurvatureTensor4& r, const Vec4& x, const Vec4& y);

// Quadratic form over (lambda3, lambda4, h3, h4) whose kernel encodes the
// fiber correspondence.
struct QForm {
  std::array<std::array<double, 4>, 4> m{};
};

QForm q_form(const CurvatureTensor4& r);

struct R2Detail {
  bool ok = false;
  double max_excess = 0.0;      // worst (max sectional through x) - kappa_max
  double plane_distance = 0.0;  // worst maximizer-vs-fiber principal angle
  bool unique = false;          // both ascent starts agree for every sample
};

struct R3Detail {
  bool ok = false;
  double max_deviation = 0.0;  // worst |sectional(fiber plane) - kappa_max|
};

struct PropertyReport {
  bool r1 = false;
  double bianchi_residual = 0.0;
  R2Detail r2{};
  R3Detail r3{};
  double worst_residual = 0.0;

  bool all_ok() const { return r1 && r2.ok && r3.ok; }
};

// Checks extremality and uniqueness of fiber-plane curvature on sampled
// directions, plus the fiber-plane curvature value itself.
PropertyReport verify_r2_r3(const CurvatureTensor4& r, const PhiMap& f, int samples,
                            std::uint64_t seed);

// Reads the fibration back out of the kernel of the quadratic form. Throws
// KernelDimension when the kernel is not 2-dimensional (or does not project
// onto the lambda plane), RealEigenvalues when the recovered map is not a
// fibration.
PhiMap recover_fibration(const CurvatureTensor4& r);

}  // namespace gcfib
