#include "geoflow/surface_flow.hpp"

#include <cmath>

#include <Eigen/Geometry>

#include "geoflow/linear_system.hpp"

namespace geoflow {

namespace {

constexpr double kSolveTol3d = 1e-12;

// DOF layout: H at 0..K-1, positions interleaved at K + 3i + k.
struct Layout3 {
  int n;
  int scalar(int i) const { return i; }
  int pos(int i, int k) const { return n + 3 * i + k; }
};

// Cached per-face quantities for one assembly geometry.
struct Geometry3 {
  const TriangleSurface* mesh;
  SurfaceFaces fd;
  std::vector<Vec3> omega;
  std::vector<std::array<Vec3, 3>> grad;  // barycentric basis gradients per face
  int n = 0;

  explicit Geometry3(const TriangleSurface& m) : mesh(&m), fd(face_data(m)), n(m.vertex_count()) {
    omega.assign(n, Vec3::Zero());
    grad.resize(m.face_count());
    for (int j = 0; j < m.face_count(); ++j) {
      const auto& f = m.faces()[j];
      const Vec3& a = m.vertex(f[0]);
      const Vec3& b = m.vertex(f[1]);
      const Vec3& c = m.vertex(f[2]);
      const double two_area = 2.0 * fd.area[j];
      const Vec3& nrm = fd.normal[j];
      grad[j] = {nrm.cross(c - b) / two_area, nrm.cross(a - c) / two_area,
                 nrm.cross(b - a) / two_area};
      for (int k : f) omega[k] += fd.area[j] / 3.0 * fd.normal[j];
    }
  }
};

void add_scalar_stiffness(SparseSystem& sys, const Layout3& lo, const Geometry3& g, double coeff) {
  const auto& faces = g.mesh->faces();
  for (int j = 0; j < g.mesh->face_count(); ++j) {
    const auto& f = faces[j];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        sys.add(lo.scalar(f[r]), lo.scalar(f[c]),
                coeff * g.fd.area[j] * g.grad[j][r].dot(g.grad[j][c]));
  }
}

void add_vector_stiffness(SparseSystem& sys, const Layout3& lo, const Geometry3& g, double coeff) {
  const auto& faces = g.mesh->faces();
  for (int j = 0; j < g.mesh->face_count(); ++j) {
    const auto& f = faces[j];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const double w = coeff * g.fd.area[j] * g.grad[j][r].dot(g.grad[j][c]);
        for (int k = 0; k < 3; ++k) sys.add(lo.pos(f[r], k), lo.pos(f[c], k), w);
      }
  }
}

void add_coupling(SparseSystem& sys, const Layout3& lo, const Geometry3& g, double coeff) {
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 3; ++k) sys.add(lo.scalar(i), lo.pos(i, k), coeff * g.omega[i][k]);
}

void add_coupling_transpose(SparseSystem& sys, const Layout3& lo, const Geometry3& g,
                            double coeff) {
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 3; ++k) sys.add(lo.pos(i, k), lo.scalar(i), coeff * g.omega[i][k]);
}

std::vector<double> stiff_apply(const Geometry3& g, const std::vector<double>& u) {
  std::vector<double> out(g.n, 0.0);
  const auto& faces = g.mesh->faces();
  for (int j = 0; j < g.mesh->face_count(); ++j) {
    const auto& f = faces[j];
    for (int r = 0; r < 3; ++r) {
      double acc = 0.0;
      for (int c = 0; c < 3; ++c)
        acc += g.fd.area[j] * g.grad[j][r].dot(g.grad[j][c]) * u[f[c]];
      out[f[r]] += acc;
    }
  }
  return out;
}

std::vector<Vec3> stiff_apply_vec(const Geometry3& g, const std::vector<Vec3>& x) {
  std::vector<Vec3> out(g.n, Vec3::Zero());
  const auto& faces = g.mesh->faces();
  for (int j = 0; j < g.mesh->face_count(); ++j) {
    const auto& f = faces[j];
    for (int r = 0; r < 3; ++r) {
      Vec3 acc = Vec3::Zero();
      for (int c = 0; c < 3; ++c)
        acc += g.fd.area[j] * g.grad[j][r].dot(g.grad[j][c]) * x[f[c]];
      out[f[r]] += acc;
    }
  }
  return out;
}

SurfaceState make_state(const std::vector<double>& x, const Layout3& lo,
                        const TriangleSurface& connectivity, double time, long step) {
  std::vector<Vec3> verts(lo.n);
  for (int i = 0; i < lo.n; ++i)
    verts[i] = Vec3(x[lo.pos(i, 0)], x[lo.pos(i, 1)], x[lo.pos(i, 2)]);
  std::vector<double> h(x.begin(), x.begin() + lo.n);
  return SurfaceState{connectivity.with_vertices(std::move(verts)), std::move(h), time, step};
}

}  // namespace

SurfaceState bgn3d_step(const SurfaceState& state, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  const Geometry3 g(state.mesh);
  const Layout3 lo{g.n};
  SparseSystem sys(4 * g.n);

  add_scalar_stiffness(sys, lo, g, 1.0);
  add_coupling(sys, lo, g, 1.0 / tau);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(state.mesh.vertex(i)) / tau);

  add_coupling_transpose(sys, lo, g, 1.0);
  add_vector_stiffness(sys, lo, g, -1.0);

  sys.finalize();
  return make_state(sys.solve(kSolveTol3d), lo, state.mesh, state.time + tau,
                    state.step_index + 1);
}

SurfaceState pc3d_step(const SurfaceState& state, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  const SurfaceState predicted = bgn3d_step(state, 0.5 * tau);
  const Geometry3 g(predicted.mesh);
  const Layout3 lo{g.n};
  SparseSystem sys(4 * g.n);

  const std::vector<double>& hm = state.mean_curvature;
  const std::vector<Vec3>& xm = state.mesh.vertices();

  // (B/tau) X + (Ks/2) H = (B/tau) X^m - (Ks/2) H^m.
  add_scalar_stiffness(sys, lo, g, 0.5);
  add_coupling(sys, lo, g, 1.0 / tau);
  const std::vector<double> kh = stiff_apply(g, hm);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(xm[i]) / tau - 0.5 * kh[i]);

  // Vector equations scaled by 2/tau for symmetry.
  add_coupling_transpose(sys, lo, g, 1.0 / tau);
  add_vector_stiffness(sys, lo, g, -1.0 / tau);
  const std::vector<Vec3> k2x = stiff_apply_vec(g, xm);
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 3; ++k)
      sys.set_rhs(lo.pos(i, k), (-g.omega[i][k] * hm[i] + k2x[i][k]) / tau);

  sys.finalize();
  return make_state(sys.solve(kSolveTol3d), lo, state.mesh, state.time + tau,
                    state.step_index + 1);
}

SurfaceState cnlf3d_step(const SurfaceState& prev, const SurfaceState& curr, double tau,
                         bool regularize) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  if (prev.mesh.vertex_count() != curr.mesh.vertex_count())
    throw DimensionMismatch("leap-frog levels have different vertex counts");
  const Geometry3 g(curr.mesh);
  const Layout3 lo{g.n};
  SparseSystem sys(4 * g.n);

  const std::vector<double>& hp = prev.mean_curvature;
  const std::vector<Vec3>& xp = prev.mesh.vertices();

  add_scalar_stiffness(sys, lo, g, 0.5);
  add_coupling(sys, lo, g, 0.5 / tau);
  const std::vector<double> kh = stiff_apply(g, hp);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), 0.5 * g.omega[i].dot(xp[i]) / tau - 0.5 * kh[i]);

  add_coupling_transpose(sys, lo, g, 0.5 / tau);
  add_vector_stiffness(sys, lo, g, -0.5 / tau);
  const std::vector<Vec3> k2x = stiff_apply_vec(g, xp);
  for (int i = 0; i < g.n; ++i)
    for (int k = 0; k < 3; ++k)
      sys.set_rhs(lo.pos(i, k), 0.5 * (-g.omega[i][k] * hp[i] + k2x[i][k]) / tau);

  sys.finalize();
  SurfaceState next =
      make_state(sys.solve(kSolveTol3d), lo, curr.mesh, curr.time + tau, curr.step_index + 1);
  if (regularize) return trivial_flow_3d_step(next, tau);
  return next;
}

SurfaceState bdf2_3d_step(const SurfaceState& prev, const SurfaceState& curr, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("time step must be positive");
  if (prev.mesh.vertex_count() != curr.mesh.vertex_count())
    throw DimensionMismatch("BDF2 levels have different vertex counts");
  const SurfaceState predicted = bgn3d_step(curr, tau);
  const Geometry3 g(predicted.mesh);
  const Layout3 lo{g.n};
  SparseSystem sys(4 * g.n);

  add_scalar_stiffness(sys, lo, g, 1.0);
  add_coupling(sys, lo, g, 1.5 / tau);
  for (int i = 0; i < g.n; ++i) {
    const Vec3 lhs = 2.0 * curr.mesh.vertex(i) - 0.5 * prev.mesh.vertex(i);
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(lhs) / tau);
  }

  add_coupling_transpose(sys, lo, g, 1.5 / tau);
  add_vector_stiffness(sys, lo, g, -1.5 / tau);

  sys.finalize();
  return make_state(sys.solve(kSolveTol3d), lo, curr.mesh, curr.time + tau,
                    curr.step_index + 1);
}

SurfaceState trivial_flow_3d_step(const SurfaceState& state, double tau) {
  const Geometry3 g(state.mesh);
  const Layout3 lo{g.n};
  SparseSystem sys(4 * g.n);
  add_coupling(sys, lo, g, 1.0 / tau);
  for (int i = 0; i < g.n; ++i)
    sys.set_rhs(lo.scalar(i), g.omega[i].dot(state.mesh.vertex(i)) / tau);
  add_coupling_transpose(sys, lo, g, 1.0);
  add_vector_stiffness(sys, lo, g, -1.0);
  sys.finalize();
  return make_state(sys.solve(kSolveTol3d), lo, state.mesh, state.time, state.step_index);
}

SurfaceState run_surface_flow(const TriangleSurface& initial, SurfaceScheme scheme, double tau,
                              double T, const SurfaceCallbacks& callbacks,
                              const SurfaceFlowOptions& options) {
  if (!(tau > 0.0) || !(T > 0.0)) throw InvalidArgument("tau and T must be positive");
  const long steps = std::llround(T / tau);
  if (steps < 1 || std::abs(steps * tau - T) > 1e-9 * std::max(1.0, T))
    throw InvalidArgument("T/tau must be a positive integer");

  SurfaceState curr{initial, init_mean_curvature(initial), 0.0, 0};
  if (callbacks.on_state) callbacks.on_state(curr);

  const bool two_step = scheme == SurfaceScheme::Cnlf || scheme == SurfaceScheme::Bdf2;
  SurfaceState prev = curr;
  long m = 0;
  try {
    if (two_step) {
      SurfaceState next = pc3d_step(curr, tau);
      prev = std::move(curr);
      curr = std::move(next);
      if (callbacks.on_state) callbacks.on_state(curr);
      m = 1;
    }
    for (; m < steps; ++m) {
      SurfaceState next = [&] {
        switch (scheme) {
          case SurfaceScheme::Bgn:
            return bgn3d_step(curr, tau);
          case SurfaceScheme::PredictorCorrector:
            return pc3d_step(curr, tau);
          case SurfaceScheme::Cnlf:
            return cnlf3d_step(prev, curr, tau, options.cnlf_regularize);
          case SurfaceScheme::Bdf2:
            return bdf2_3d_step(prev, curr, tau);
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
