#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "gcfib/linalg.hpp"

namespace gcfib {

// Linear map J on R^4 with J*J = -I (within 1e-10). Orthogonality is not
// required; skew structures are the interesting case.
struct AlmostComplexStructure {
  Mat4 j{};

  static AlmostComplexStructure checked(const Mat4& m);
  static AlmostComplexStructure unchecked(const Mat4& m) { return {m}; }
};

// 2x2 matrix with no real eigenvalues: discriminant (a-d)^2 + 4bc < 0.
// Values in [-1e-12, 0) are rejected as numerically degenerate.
struct PhiMap {
  Mat2 f{};

  static PhiMap checked(const Mat2& m);
  static PhiMap unchecked(const Mat2& m) { return {m}; }
};

AlmostComplexStructure hopf_structure();

// Block form J = diag(A, B) from the phi-map entries. Throws RealEigenvalues
// when the discriminant is >= -1e-12.
AlmostComplexStructure phi_to_structure(const PhiMap& f);

// Inverse of phi_to_structure for block-diagonal structures. Requires the two
// off-diagonal 2x2 blocks to vanish within 1e-10 (NotBlockForm otherwise) and
// |a21| >= 1e-12 (DegenerateBlock; cannot occur for a genuine structure since
// a triangular 2x2 block never squares to -E, but checked anyway).
PhiMap structure_to_phi(const AlmostComplexStructure& j);

struct GreatCircleFibration {
  enum class Kind { CanonicalHopf, SkewHopf, SpecialBasis };

  Kind kind{Kind::CanonicalHopf};
  AlmostComplexStructure structure{};  // in basis coordinates
  std::optional<PhiMap> phi{};         // present for SpecialBasis
  Mat4 basis = Mat4::identity();

  static GreatCircleFibration hopf();
  static GreatCircleFibration skew(const AlmostComplexStructure& j,
                                   const Mat4& basis = Mat4::identity());
  static GreatCircleFibration special(const PhiMap& f, const Mat4& basis = Mat4::identity());

  // M J M^-1: the structure acting on ambient coordinates.
  const Mat4& ambient_structure() const;

 private:
  mutable std::optional<Mat4> ambient_{};
};

// Fiber plane through a unit point x: span(x, Jx) in ambient coordinates.
OrientedPlane2 fiber_through(const GreatCircleFibration& f, const Vec4& x);

// Fiber plane of the lambda-chart: span((1,0,l3,l4), (0,1,phi(l3,l4))).
// Defined for any F, including ones with real eigenvalues; this is what makes
// broken families testable.
OrientedPlane2 phi_fiber(const PhiMap& f, double lambda3, double lambda4);

struct FibrationReport {
  bool clean{};
  int pairs{};
  double min_separation_sv{};
  std::optional<std::pair<Vec4, Vec4>> witness{};
};

// Samples pairs of fibers and checks that distinct fibers intersect only at
// the origin. For a special-basis family with a real eigenvalue the sampling
// includes eigenvector-direction probes, which are guaranteed to produce an
// intersecting pair.
FibrationReport verify_fibration(const GreatCircleFibration& f, int pair_samples,
                                 std::uint64_t seed);

struct OrthogonalFiberPair {
  OrientedPlane2 p{}, q{};
  double residual{};  // pi/2 minus the smaller principal angle at the optimum
};

// Searches for two fibers meeting at right angles in both principal angles.
// Coarse scan over sampled base-point pairs, then pattern-search refinement.
// Throws SearchFailed if the residual stays above 1e-4.
OrthogonalFiberPair orthogonal_fiber_pair(const GreatCircleFibration& f, int search_grid);

// Rank of the linear middle map of the base-surface decomposition. 0 for the
// Hopf family, 1 or 2 for properly skew families.
int rank_stratum(const PhiMap& f);

}  // namespace gcfib
