#pragma once

// Time-stepping engines for planar geometric flows. All schemes solve one
// sparse symmetric indefinite system per step (two for predictor-corrector
// and BDF2, which assemble on a predicted polygon).
//
// Flows:  surface diffusion (SDF), curve shortening (CSF), area-preserving
//         curve shortening (AP-CSF), anisotropic surface diffusion (A-SDF,
//         stabilized xi-vector form).
// Schemes: first-order semi-implicit (BGN/BJL), predictor-corrector,
//         Crank-Nicolson leap-frog, BDF2 (the latter two for SDF only).

#include <functional>
#include <optional>

#include "geoflow/anisotropy.hpp"
#include "geoflow/curve.hpp"

namespace geoflow {

enum class CurveFlowKind { SurfaceDiffusion, CurveShortening, AreaPreservingCurveShortening, AnisotropicSurfaceDiffusion };

struct CurveFlow {
  CurveFlowKind kind = CurveFlowKind::SurfaceDiffusion;
  std::optional<AnisotropyModel> model;  // required for A-SDF

  static CurveFlow sdf() { return {CurveFlowKind::SurfaceDiffusion, std::nullopt}; }
  static CurveFlow csf() { return {CurveFlowKind::CurveShortening, std::nullopt}; }
  static CurveFlow apcsf() { return {CurveFlowKind::AreaPreservingCurveShortening, std::nullopt}; }
  static CurveFlow asdf(AnisotropyModel m) {
    return {CurveFlowKind::AnisotropicSurfaceDiffusion, std::move(m)};
  }
  bool anisotropic() const { return kind == CurveFlowKind::AnisotropicSurfaceDiffusion; }
};

enum class TimeScheme { Bgn, PredictorCorrector, Cnlf, Bdf2 };

// Default relative residual tolerance handed to the sparse solver.
inline constexpr double kSolveTol = 1e-12;

// One semi-implicit first-order step assembled on the current polygon
// (the BGN scheme; BJL scheme when the flow is anisotropic).
CurveState bgn_step(const CurveState& state, double tau, const CurveFlow& flow);

// Predictor-corrector step: a half-step bgn_step predicts the midpoint
// geometry (its scalar output is discarded), then the Crank-Nicolson-type
// corrector is assembled entirely on the predicted polygon.
CurveState pc_step(const CurveState& state, double tau, const CurveFlow& flow);

// Crank-Nicolson leap-frog step over levels (m-1, m). SDF only. With
// regularize set, the result is post-processed by one trivial-flow BGN step
// that redistributes vertices at fixed normal position.
CurveState cnlf_step(const CurveState& prev, const CurveState& curr, double tau,
                     bool regularize = false);

// BDF2 step over levels (m-1, m), assembled on the polygon predicted by one
// full-tau bgn_step from the current level. SDF only.
CurveState bdf2_step(const CurveState& prev, const CurveState& curr, double tau);

// Trivial-flow redistribution: zero normal velocity in the lumped sense,
// curvature-consistency equation on the new positions.
CurveState trivial_flow_step(const CurveState& state, double tau);

struct CurveCallbacks {
  // Invoked after the initial state is formed and after every step.
  std::function<void(const CurveState&)> on_state;
};

struct CurveFlowOptions {
  bool cnlf_regularize = false;
};

// Full trajectory driver: initializes kappa^0 by the weak-form least squares
// (and mu^0 = (gamma + gamma'') kappa^0 for A-SDF), obtains the second level
// of two-step schemes from one pc_step, then iterates to t = T. T/tau must
// be integral. Failures are rethrown as SteppingError with the step index.
CurveState run_curve_flow(const ClosedPolygon& initial, const CurveFlow& flow, TimeScheme scheme,
                          double tau, double T, const CurveCallbacks& callbacks = {},
                          const CurveFlowOptions& options = {});

// Initial scalar field for a flow: curvature, or chemical potential when
// anisotropic (theta evaluated from the normalized weighted vertex normal).
NodalScalarField initial_scalar(const ClosedPolygon& poly, const CurveFlow& flow);

}  // namespace geoflow
