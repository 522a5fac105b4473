#pragma once

#include <cstdint>

#include "gcfib/linalg.hpp"

namespace gcfib {

// Deterministic generator (splitmix64 core, Box-Muller normals). Every sample
// stream is derived from (seed, index) so results do not depend on evaluation
// order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();
  Vec3 unit_vec3();
  Vec4 unit_vec4();
  Mat4 random_rotation4();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Point i of an n-point low-discrepancy lattice on the unit 3-sphere.
Vec4 s3_lattice_point(int i, int n);

}  // namespace gcfib
