#include <benchmark/benchmark.h>

#include "gcfib/fibration.hpp"
#include "gcfib/grassmann.hpp"
#include "gcfib/linalg.hpp"
#include "gcfib/rng.hpp"
#include "gcfib/volume.hpp"

namespace {

const gcfib::Mat2 kSkewF{1.0, -3.0, 2.0, -1.0};

void bm_phi_to_structure(benchmark::State& state) {
  gcfib::PhiMap f = gcfib::PhiMap::unchecked(kSkewF);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::phi_to_structure(f));
  }
}
BENCHMARK(bm_phi_to_structure);

void bm_roundtrip(benchmark::State& state) {
  gcfib::PhiMap f = gcfib::PhiMap::unchecked(kSkewF);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::structure_to_phi(gcfib::phi_to_structure(f)));
  }
}
BENCHMARK(bm_roundtrip);

void bm_fiber_through(benchmark::State& state) {
  gcfib::GreatCircleFibration fib =
      gcfib::GreatCircleFibration::special(gcfib::PhiMap::unchecked(kSkewF));
  gcfib::Rng rng(7, 0);
  gcfib::Vec4 x = rng.unit_vec4();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::fiber_through(fib, x));
  }
}
BENCHMARK(bm_fiber_through);

void bm_principal_angles(benchmark::State& state) {
  gcfib::GreatCircleFibration fib =
      gcfib::GreatCircleFibration::special(gcfib::PhiMap::unchecked(kSkewF));
  gcfib::Rng rng(11, 0);
  gcfib::OrientedPlane2 p = gcfib::fiber_through(fib, rng.unit_vec4());
  gcfib::OrientedPlane2 q = gcfib::fiber_through(fib, rng.unit_vec4());
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::principal_angles(p, q));
  }
}
BENCHMARK(bm_principal_angles);

void bm_base_surface_100(benchmark::State& state) {
  gcfib::GreatCircleFibration fib =
      gcfib::GreatCircleFibration::special(gcfib::PhiMap::unchecked(kSkewF));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::base_surface(fib, 100, 3));
  }
}
BENCHMARK(bm_base_surface_100);

void bm_gage_fit_200(benchmark::State& state) {
  gcfib::GreatCircleFibration fib =
      gcfib::GreatCircleFibration::special(gcfib::PhiMap::unchecked(kSkewF));
  std::vector<gcfib::SurfacePoint> pts = gcfib::base_surface(fib, 200, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::gage_decompose(pts));
  }
}
BENCHMARK(bm_gage_fit_200);

void bm_beta_quadrature(benchmark::State& state) {
  gcfib::ModelSpaceParams p = gcfib::ModelSpaceParams::checked(4, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcfib::beta_quadrature(p));
  }
}
BENCHMARK(bm_beta_quadrature);

}  // namespace

BENCHMARK_MAIN();
