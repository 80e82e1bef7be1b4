#include <benchmark/benchmark.h>

#include "geoflow/shapes.hpp"
#include "geoflow/surface_flow.hpp"

using namespace geoflow;

static void SurfaceBgnStep(benchmark::State& state) {
  const int freq = static_cast<int>(state.range(0));
  TriangleSurface ell = make_ellipsoid(2.0, 1.0, 1.0, freq);
  const SurfaceState s{ell, init_mean_curvature(ell), 0.0, 0};
  for (auto _ : state) {
    SurfaceState next = bgn3d_step(s, 1e-3);
    benchmark::DoNotOptimize(next.mesh.vertices().data());
  }
}
BENCHMARK(SurfaceBgnStep)->Arg(5)->Arg(10);

static void SurfacePcStep(benchmark::State& state) {
  const int freq = static_cast<int>(state.range(0));
  TriangleSurface ell = make_ellipsoid(2.0, 1.0, 1.0, freq);
  const SurfaceState s{ell, init_mean_curvature(ell), 0.0, 0};
  for (auto _ : state) {
    SurfaceState next = pc3d_step(s, 1e-3);
    benchmark::DoNotOptimize(next.mesh.vertices().data());
  }
}
BENCHMARK(SurfacePcStep)->Arg(5)->Arg(10);
