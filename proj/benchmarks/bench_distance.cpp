#include <benchmark/benchmark.h>

#include "geoflow/metrics.hpp"
#include "geoflow/shapes.hpp"

using namespace geoflow;

static void ManifoldDistance2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClosedPolygon a = make_ellipse(2.0, 1.0, n);
  const ClosedPolygon b = make_ellipse(1.99, 1.005, n);
  for (auto _ : state) benchmark::DoNotOptimize(manifold_distance_2d(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(ManifoldDistance2d)->RangeMultiplier(2)->Range(512, 4096)->Complexity();

static void ManifoldDistance3d(benchmark::State& state) {
  const TriangleSurface a = make_icosphere(10, 1.0);
  const TriangleSurface b = make_ellipsoid(1.02, 1.0, 0.98, 10);
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(manifold_distance_3d(a, b, res).value);
}
BENCHMARK(ManifoldDistance3d)->Arg(128)->Arg(256);
