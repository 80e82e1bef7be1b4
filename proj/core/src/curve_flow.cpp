#include "geoflow/curve_flow.hpp"

#include <cmath>

#include "geoflow/linear_system.hpp"

namespace geoflow {

namespace {

// DOF layout: scalar unknowns 0..N-1, then positions interleaved
// (x_i at N+2i, y_i at N+2i+1). AP-CSF appends its mean multiplier at 3N.
struct Layout {
  int n;
  int scalar(int i) const { return i; }
  int pos(int i, int k) const { return n + 2 * i + k; }
  int lambda() const { return 3 * n; }
};

struct Geometry {
  CurveEdges edges;
  std::vector<Vec2> omega;
  std::vector<double> mass;
  int n = 0;

  explicit Geometry(const ClosedPolygon& poly)
      : edges(edge_data(poly)), omega(weighted_normals(edges)), n(poly.size()) {
    mass.resize(n);
    for (int j = 0; j < n; ++j) mass[j] = 0.5 * (edges.len[j] + edges.len[(j + 1) % n]);
  }
  double total_mass() const {
    double l = 0.0;
    for (double m : mass) l += m;
    return l;
  }
};

// (K u)_i for the scalar stiffness K of the polygon.
std::vector<double> stiff_apply(const Geometry& g, const NodalScalarField& u) {
  std::vector<double> out(g.n, 0.0);
  for (int j = 0; j < g.n; ++j) {
    const int a = (j + g.n - 1) % g.n, b = j;
    const double w = (u[b] - u[a]) / g.edges.len[j];
    out[b] += w;
    out[a] -= w;
  }
  return out;
}

// (K2 X)_i, optionally Z-weighted per edge.
std::vector<Vec2> stiff_apply_vec(const Geometry& g, const std::vector<Vec2>& x,
                                  const std::vector<Mat2>* z) {
  std::vector<Vec2> out(g.n, Vec2::Zero());
  for (int j = 0; j < g.n; ++j) {
    const int a = (j + g.n - 1) % g.n, b = j;
    Vec2 w = (x[b] - x[a]) / g.edges.len[j];
    if (z) w = (*z)[j] * w;
    out[b] += w;
    out[a] -= w;
  }
  return out;
}

void add_scalar_stiffness(SparseSystem& sys, const Layout& lo, const Geometry& g, double coeff) {
  for (int j = 0; j < g.n; ++j) {
    const int a = (j + g.n - 1) % g.n, b = j;
    const double w = coeff / g.edges.len[j];
    sys.add(lo.scalar(a), lo.scalar(a), w);
    sys.add(lo.scalar(b), lo.scalar(b), w);
    sys.add(lo.scalar(a), lo.scalar(b), -w);
    sys.add(lo.scalar(b), lo.scalar(a), -w);
  }
}

void add_scalar_mass(SparseSystem& sys, const Layout& lo, const Geometry& g, double coeff) {
  for (int i = 0; i < g.n; ++i) sys.add(lo.scalar(i), lo.scalar(i), coeff * g.mass[i]);
}

// Coupling B: row i of the scalar equations gets omega_i . X_i.
void add_coupling(SparseSystem& sys, const Layout& lo, const Geometry& g, double coeff) {
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 2; ++k) sys.add(lo.scalar(i), lo.pos(i, k), coeff * g.omega[i][k]);
}

void add_coupling_transpose(SparseSystem& sys, const Layout& lo, const Geometry& g, double coeff) {
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 2; ++k) sys.add(lo.pos(i, k), lo.scalar(i), coeff * g.omega[i][k]);
}

void add_vector_stiffness(SparseSystem& sys, const Layout& lo, const Geometry& g, double coeff,
                          const std::vector<Mat2>* z) {
  for (int j = 0; j < g.n; ++j) {
    const int a = (j + g.n - 1) % g.n, b = j;
    Mat2 m = Mat2::Identity();
    if (z) m = (*z)[j];
    m *= coeff / g.edges.len[j];
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        sys.add(lo.pos(a, k), lo.pos(a, l), m(k, l));
        sys.add(lo.pos(b, k), lo.pos(b, l), m(k, l));
        sys.add(lo.pos(a, k), lo.pos(b, l), -m(k, l));
        sys.add(lo.pos(b, k), lo.pos(a, l), -m(k, l));
      }
  }
}

std::vector<Mat2> edge_zk(const AnisotropyModel& model, const Geometry& g) {
  std::vector<Mat2> z(g.n);
  for (int j = 0; j < g.n; ++j) z[j] = zk_matrix(model, g.edges.normal[j]);
  return z;
}

const AnisotropyModel& require_model(const CurveFlow& flow) {
  if (!flow.model) throw InvalidArgument("anisotropic flow needs an AnisotropyModel");
  return *flow.model;
}

CurveState make_state(const std::vector<double>& x, const Layout& lo, double time, long step) {
  std::vector<Vec2> verts(lo.n);
  for (int i = 0; i < lo.n; ++i) verts[i] = Vec2(x[lo.pos(i, 0)], x[lo.pos(i, 1)]);
  NodalScalarField scalar(x.begin(), x.begin() + lo.n);
  return CurveState{ClosedPolygon::from_clockwise(std::move(verts)), std::move(scalar), time, step};
}

}  // namespace

CurveState bgn_step(const CurveState& state, double tau, const CurveFlow& flow) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  const Geometry g(state.polygon);
  const Layout lo{g.n};
  const bool ap = flow.kind == CurveFlowKind::AreaPreservingCurveShortening;
  SparseSystem sys(3 * g.n + (ap ? 1 : 0));

  // Scalar-test equations.
  switch (flow.kind) {
    case CurveFlowKind::SurfaceDiffusion:
      add_scalar_stiffness(sys, lo, g, 1.0);
      break;
    case CurveFlowKind::AnisotropicSurfaceDiffusion:
      add_scalar_stiffness(sys, lo, g, 1.0);
      break;
    case CurveFlowKind::CurveShortening:
      add_scalar_mass(sys, lo, g, 1.0);
      break;
    case CurveFlowKind::AreaPreservingCurveShortening: {
      add_scalar_mass(sys, lo, g, 1.0);
      const double L = g.total_mass();
      for (int i = 0; i < g.n; ++i) {
        sys.add(lo.scalar(i), lo.lambda(), -g.mass[i]);
        sys.add(lo.lambda(), lo.scalar(i), -g.mass[i]);
      }
      sys.add(lo.lambda(), lo.lambda(), L);
      break;
    }
  }
  add_coupling(sys, lo, g, 1.0 / tau);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(state.polygon.vertex(i)) / tau);

  // Vector-test equations.
  std::vector<Mat2> z;
  const std::vector<Mat2>* zp = nullptr;
  if (flow.anisotropic()) {
    z = edge_zk(require_model(flow), g);
    zp = &z;
  }
  add_coupling_transpose(sys, lo, g, 1.0);
  add_vector_stiffness(sys, lo, g, -1.0, zp);

  sys.finalize();
  return make_state(sys.solve(kSolveTol), lo, state.time + tau, state.step_index + 1);
}

CurveState pc_step(const CurveState& state, double tau, const CurveFlow& flow) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  // Predictor: half-step first-order solve; only the geometry is kept.
  const CurveState predicted = bgn_step(state, 0.5 * tau, flow);
  const Geometry g(predicted.polygon);
  const Layout lo{g.n};
  const bool ap = flow.kind == CurveFlowKind::AreaPreservingCurveShortening;
  SparseSystem sys(3 * g.n + (ap ? 1 : 0));

  const NodalScalarField& ks = state.scalar;
  const std::vector<Vec2>& xs = state.polygon.vertices();

  std::vector<Mat2> z;
  const std::vector<Mat2>* zp = nullptr;
  if (flow.anisotropic()) {
    z = edge_zk(require_model(flow), g);
    zp = &z;
  }

  // Scalar-test equations: (B/tau) X + A/2 kappa = (B/tau) X^m - A/2 kappa^m.
  switch (flow.kind) {
    case CurveFlowKind::SurfaceDiffusion:
    case CurveFlowKind::AnisotropicSurfaceDiffusion: {
      add_scalar_stiffness(sys, lo, g, 0.5);
      const std::vector<double> kk = stiff_apply(g, ks);
      for (int i = 0; i < g.n; ++i)
        sys.set_rhs(lo.scalar(i), g.omega[i].dot(xs[i]) / tau - 0.5 * kk[i]);
      break;
    }
    case CurveFlowKind::CurveShortening:
      add_scalar_mass(sys, lo, g, 0.5);
      for (int i = 0; i < g.n; ++i)
        sys.set_rhs(lo.scalar(i), g.omega[i].dot(xs[i]) / tau - 0.5 * g.mass[i] * ks[i]);
      break;
    case CurveFlowKind::AreaPreservingCurveShortening: {
      add_scalar_mass(sys, lo, g, 0.5);
      const double L = g.total_mass();
      double rhs_lambda = 0.0;
      for (int i = 0; i < g.n; ++i) {
        sys.add(lo.scalar(i), lo.lambda(), -g.mass[i]);
        sys.add(lo.lambda(), lo.scalar(i), -g.mass[i]);
        rhs_lambda += g.mass[i] * ks[i];
        sys.set_rhs(lo.scalar(i), g.omega[i].dot(xs[i]) / tau - 0.5 * g.mass[i] * ks[i]);
      }
      sys.add(lo.lambda(), lo.lambda(), 2.0 * L);
      sys.set_rhs(lo.lambda(), rhs_lambda);
      break;
    }
  }
  add_coupling(sys, lo, g, 1.0 / tau);

  // Vector-test equations, scaled by 2/tau to keep the matrix symmetric:
  // (Bt/tau) kappa - (K2/tau) X = -(Bt/tau) kappa^m + (K2/tau) X^m.
  add_coupling_transpose(sys, lo, g, 1.0 / tau);
  add_vector_stiffness(sys, lo, g, -1.0 / tau, zp);
  const std::vector<Vec2> k2x = stiff_apply_vec(g, xs, zp);
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 2; ++k)
      sys.set_rhs(lo.pos(i, k), (-g.omega[i][k] * ks[i] + k2x[i][k]) / tau);

  sys.finalize();
  return make_state(sys.solve(kSolveTol), lo, state.time + tau, state.step_index + 1);
}

CurveState cnlf_step(const CurveState& prev, const CurveState& curr, double tau, bool regularize) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  if (prev.polygon.size() != curr.polygon.size())
    throw DimensionMismatch("leap-frog levels have different vertex counts");
  const Geometry g(curr.polygon);
  const Layout lo{g.n};
  SparseSystem sys(3 * g.n);

  const NodalScalarField& kp = prev.scalar;
  const std::vector<Vec2>& xp = prev.polygon.vertices();

  // (B/2tau) X + (K/2) kappa = (B/2tau) X^{m-1} - (K/2) kappa^{m-1}.
  add_scalar_stiffness(sys, lo, g, 0.5);
  add_coupling(sys, lo, g, 0.5 / tau);
  const std::vector<double> kk = stiff_apply(g, kp);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), 0.5 * g.omega[i].dot(xp[i]) / tau - 0.5 * kk[i]);

  // Vector equations scaled by 1/tau for symmetry.
  add_coupling_transpose(sys, lo, g, 0.5 / tau);
  add_vector_stiffness(sys, lo, g, -0.5 / tau, nullptr);
  const std::vector<Vec2> k2x = stiff_apply_vec(g, xp, nullptr);
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 2; ++k)
      sys.set_rhs(lo.pos(i, k), 0.5 * (-g.omega[i][k] * kp[i] + k2x[i][k]) / tau);

  sys.finalize();
  CurveState next = make_state(sys.solve(kSolveTol), lo, curr.time + tau, curr.step_index + 1);
  if (regularize) return trivial_flow_step(next, tau);
  return next;
}

CurveState bdf2_step(const CurveState& prev, const CurveState& curr, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  if (prev.polygon.size() != curr.polygon.size())
    throw DimensionMismatch("BDF2 levels have different vertex counts");
  // Predicted polygon: one full-tau first-order step from the current level.
  const CurveState predicted = bgn_step(curr, tau, CurveFlow::sdf());
  const Geometry g(predicted.polygon);
  const Layout lo{g.n};
  SparseSystem sys(3 * g.n);

  // K kappa + (1.5 B/tau) X = (B/tau)(2 X^m - 0.5 X^{m-1}).
  add_scalar_stiffness(sys, lo, g, 1.0);
  add_coupling(sys, lo, g, 1.5 / tau);
  for (int i = 0; i < g.n; ++i) {
    const Vec2 lhs = 2.0 * curr.polygon.vertex(i) - 0.5 * prev.polygon.vertex(i);
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(lhs) / tau);
  }

  // Vector equations scaled by 1.5/tau for symmetry.
  add_coupling_transpose(sys, lo, g, 1.5 / tau);
  add_vector_stiffness(sys, lo, g, -1.5 / tau, nullptr);

  sys.finalize();
  return make_state(sys.solve(kSolveTol), lo, curr.time + tau, curr.step_index + 1);
}

CurveState trivial_flow_step(const CurveState& state, double tau) {
  const Geometry g(state.polygon);
  const Layout lo{g.n};
  SparseSystem sys(3 * g.n);
  add_coupling(sys, lo, g, 1.0 / tau);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(state.polygon.vertex(i)) / tau);
  add_coupling_transpose(sys, lo, g, 1.0);
  add_vector_stiffness(sys, lo, g, -1.0, nullptr);
  sys.finalize();
  return make_state(sys.solve(kSolveTol), lo, state.time, state.step_index);
}

NodalScalarField initial_scalar(const ClosedPolygon& poly, const CurveFlow& flow) {
  NodalScalarField kappa = init_curvature(poly);
  if (!flow.anisotropic()) return kappa;
  // Chemical potential by the theta-formulation, with theta taken from the
  // normalized weighted vertex normal.
  const AnisotropyModel& model = require_model(flow);
  const std::vector<Vec2> omega = weighted_normals(poly);
  for (int i = 0; i < poly.size(); ++i) {
    const double w = omega[i].norm();
    if (w == 0.0) throw SingularNormalEquations("vanishing vertex normal in mu^0 setup");
    const double theta = AnisotropyModel::theta_of(omega[i] / w);
    const GammaDerivatives d = model.gamma_theta(theta);
    kappa[i] *= d.value + d.d2;
  }
  return kappa;
}

CurveState run_curve_flow(const ClosedPolygon& initial, const CurveFlow& flow, TimeScheme scheme,
                          double tau, double T, const CurveCallbacks& callbacks,
                          const CurveFlowOptions& options) {
  if (!(tau > 0.0) || !(T > 0.0)) throw InvalidArgument("tau and T must be positive");
  const long steps = std::llround(T / tau);
  if (steps < 1 || std::abs(steps * tau - T) > 1e-9 * std::max(1.0, T))
    throw InvalidArgument("T/tau must be a positive integer");
  if ((scheme == TimeScheme::Cnlf || scheme == TimeScheme::Bdf2) &&
      flow.kind != CurveFlowKind::SurfaceDiffusion)
    throw InvalidArgument("CNLF and BDF2 steppers are defined for surface diffusion only");

  CurveState curr{initial, initial_scalar(initial, flow), 0.0, 0};
  if (callbacks.on_state) callbacks.on_state(curr);

  const bool two_step = scheme == TimeScheme::Cnlf || scheme == TimeScheme::Bdf2;
  CurveState prev = curr;
  long m = 0;
  try {
    if (two_step) {
      // Second initial level from one predictor-corrector step.
      CurveState next = pc_step(curr, tau, flow);
      prev = std::move(curr);
      curr = std::move(next);
      if (callbacks.on_state) callbacks.on_state(curr);
      m = 1;
    }
    for (; m < steps; ++m) {
      CurveState next = [&] {
        switch (scheme) {
          case TimeScheme::Bgn:
            return bgn_step(curr, tau, flow);
          case TimeScheme::PredictorCorrector:
            return pc_step(curr, tau, flow);
          case TimeScheme::Cnlf:
            return cnlf_step(prev, curr, tau, options.cnlf_regularize);
          case TimeScheme::Bdf2:
            return bdf2_step(prev, curr, tau);
        }
        throw InvalidArgument("unknown scheme");
      }();
      prev = std::move(curr);
      curr = std::move(next);
      if (callbacks.on_state) callbacks.on_state(curr);
    }
  } catch (const SteppingError&) {
    throw;
  } catch (const Error& e) {
    throw SteppingError(m, std::string(e.what()) + " (at step " + std::to_string(m) + ")");
  }
  return curr;
}

}  // namespace geoflow
