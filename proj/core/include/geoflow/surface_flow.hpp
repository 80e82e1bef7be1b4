#pragma once

// Surface diffusion of closed surfaces in R^3: first-order scheme,
// predictor-corrector, and the leap-frog / BDF2 analogues, plus the
// trivial-flow mesh redistribution step used to regularize CNLF.

#include <functional>

#include "geoflow/surface.hpp"

namespace geoflow {

enum class SurfaceScheme { Bgn, PredictorCorrector, Cnlf, Bdf2 };

// First-order semi-implicit step assembled on the current polyhedron.
SurfaceState bgn3d_step(const SurfaceState& state, double tau);

// Half-step prediction, then the Crank-Nicolson-type corrector assembled
// entirely on the predicted polyhedron.
SurfaceState pc3d_step(const SurfaceState& state, double tau);

// Leap-frog step over levels (m-1, m); with regularize set, the result is
// post-processed by one trivial-flow step.
SurfaceState cnlf3d_step(const SurfaceState& prev, const SurfaceState& curr, double tau,
                         bool regularize);

// BDF2 step assembled on the polyhedron predicted by one full-tau bgn3d_step.
SurfaceState bdf2_3d_step(const SurfaceState& prev, const SurfaceState& curr, double tau);

// Zero normal velocity in the lumped sense; redistributes vertices without
// moving the surface at leading order.
SurfaceState trivial_flow_3d_step(const SurfaceState& state, double tau);

struct SurfaceCallbacks {
  std::function<void(const SurfaceState&)> on_state;
};

struct SurfaceFlowOptions {
  bool cnlf_regularize = true;  // the leap-frog scheme needs it in practice
};

// Trajectory driver: H^0 from init_mean_curvature, second level of the
// two-step schemes from one pc3d_step, then iterates to t = T (T/tau
// integral). Failures are rethrown as SteppingError with the step index.
SurfaceState run_surface_flow(const TriangleSurface& initial, SurfaceScheme scheme, double tau,
                              double T, const SurfaceCallbacks& callbacks = {},
                              const SurfaceFlowOptions& options = {});

}  // namespace geoflow
