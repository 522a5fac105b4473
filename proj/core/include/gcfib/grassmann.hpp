#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "gcfib/fibration.hpp"
#include "gcfib/linalg.hpp"

namespace gcfib {

enum class DomainFactor { Minus, Plus };

// One fiber as a point of S^2 x S^2, with its chart parameter when the
// fibration has a block structure (NaN-free by construction: chartless
// samples are skipped).
struct SurfacePoint {
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  Vec3 xi_minus{};
  Vec3 xi_plus{};
};

const Vec3& factor_point(const SurfacePoint& p, DomainFactor f);
DomainFactor other_factor(DomainFactor f);

// Samples distinct fibers (principal-angle dedup) from jittered lattice base
// points. May return fewer points than requested if the attempt budget runs
// out, which does not happen for genuine fibrations at sane sample counts.
std::vector<SurfacePoint> base_surface(const GreatCircleFibration& f, int sample_count,
                                       std::uint64_t seed);

// Spread of one factor: max spherical distance to the first point.
double factor_spread(const std::vector<SurfacePoint>& pts, DomainFactor f);

// Chooses the factor over which the sample is single-valued. A constant
// factor is the image side, never the domain. Throws NotAGraph when neither
// factor works.
DomainFactor graph_domain(const std::vector<SurfacePoint>& pts);

struct LipschitzReport {
  DomainFactor domain = DomainFactor::Minus;
  double max_ratio = 0.0;
  std::pair<int, int> witness{-1, -1};
  bool domain_collapsed = false;  // no pair with usable domain distance
};

LipschitzReport lipschitz_check(const std::vector<SurfacePoint>& pts);
LipschitzReport lipschitz_check(const std::vector<SurfacePoint>& pts, DomainFactor domain);

// Projection plane + linear map + inverse projection, fitted to a sample.
// plane_normal is the domain-side plane normal, image_normal the image-side
// one; l maps domain plane coordinates to image plane coordinates.
struct GageDecomposition {
  DomainFactor domain = DomainFactor::Minus;
  Vec3 plane_normal{0.0, 0.0, 1.0};
  Vec3 image_normal{0.0, 0.0, 1.0};
  Mat2 l{};
  double fit_residual = 0.0;
  std::array<double, 2> l_singular_values{0.0, 0.0};
  int rank = 0;
  bool plane_degenerate = false;  // rank 0, image frame arbitrary
};

GageDecomposition gage_decompose(const std::vector<SurfacePoint>& pts);
GageDecomposition gage_decompose(const std::vector<SurfacePoint>& pts, DomainFactor domain);

// Orthonormal frame completing a unit normal; deterministic in n.
std::array<Vec3, 2> plane_frame(const Vec3& n);

Vec3 gage_predict(const GageDecomposition& g, const Vec3& domain_point);

// RMS spherical prediction error over a sample (e.g. held-out points).
double gage_rms(const GageDecomposition& g, const std::vector<SurfacePoint>& pts);

}  // namespace gcfib
