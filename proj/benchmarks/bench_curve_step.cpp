#include <benchmark/benchmark.h>

#include "geoflow/curve_flow.hpp"
#include "geoflow/shapes.hpp"

using namespace geoflow;

static void CurveBgnStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClosedPolygon ell = make_ellipse(2.0, 1.0, n);
  const CurveState s{ell, init_curvature(ell), 0.0, 0};
  for (auto _ : state) {
    CurveState next = bgn_step(s, 1e-4, CurveFlow::sdf());
    benchmark::DoNotOptimize(next.polygon.vertices().data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(CurveBgnStep)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void CurvePcStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClosedPolygon ell = make_ellipse(2.0, 1.0, n);
  const CurveState s{ell, init_curvature(ell), 0.0, 0};
  for (auto _ : state) {
    CurveState next = pc_step(s, 1e-4, CurveFlow::sdf());
    benchmark::DoNotOptimize(next.polygon.vertices().data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(CurvePcStep)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void AnisotropicPcStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClosedPolygon ell = make_ellipse(2.0, 1.0, n);
  const CurveFlow flow = CurveFlow::asdf(AnisotropyModel::kfold(0.05, 4));
  const CurveState s{ell, initial_scalar(ell, flow), 0.0, 0};
  for (auto _ : state) {
    CurveState next = pc_step(s, 1e-4, flow);
    benchmark::DoNotOptimize(next.polygon.vertices().data());
  }
}
BENCHMARK(AnisotropicPcStep)->Arg(320)->Arg(1280);
