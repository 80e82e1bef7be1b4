#pragma once

// Discrete differential geometry of closed polygonal curves: the polygon type,
// mass-lumped inner products, arc-length difference pairings, weighted vertex
// normals, weak-form curvature initialization and geometric diagnostics.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geoflow/errors.hpp"

namespace geoflow {

using Vec2 = Eigen::Vector2d;

// Clockwise rotation by pi/2: (x,y) -> (y,-x).
inline Vec2 perp(const Vec2& v) { return Vec2(v.y(), -v.x()); }

// Closed polygonal curve. Vertices are stored in clockwise order; the
// constructor reverses the input loop (keeping the first vertex) if the
// signed area says it is counterclockwise, so edge normals -h^perp/|h|
// always point outward for simple polygons.
class ClosedPolygon {
 public:
  explicit ClosedPolygon(std::vector<Vec2> vertices);

  // For stepper outputs: keeps the vertex indexing, throws InvalidArgument
  // if the loop is not clockwise (an inverted mesh must not be repaired
  // silently by reversal).
  static ClosedPolygon from_clockwise(std::vector<Vec2> vertices);

  int size() const { return static_cast<int>(verts_.size()); }
  const std::vector<Vec2>& vertices() const { return verts_; }
  const Vec2& vertex(int j) const { return verts_[j]; }

  // Largest pairwise coordinate extent; convenient displacement scale.
  double diameter() const;

 private:
  std::vector<Vec2> verts_;
};

// Nodal piecewise-linear periodic field: one value per vertex.
using NodalScalarField = std::vector<double>;
using NodalVectorField = std::vector<Vec2>;

// One time level of a 2D scheme: geometry plus the nodal scalar unknown
// (curvature kappa, or chemical potential mu in the anisotropic case).
struct CurveState {
  ClosedPolygon polygon;
  NodalScalarField scalar;
  double time = 0.0;
  long step_index = 0;
};

// Per-edge geometry of edge j, which runs from vertex j-1 to vertex j.
struct CurveEdges {
  std::vector<Vec2> h;       // edge vectors h_j
  std::vector<double> len;   // |h_j|
  std::vector<Vec2> normal;  // unit outward normals n_j = -h_j^perp/|h_j|
};

// Throws ZeroEdge on a degenerate edge.
CurveEdges edge_data(const ClosedPolygon& poly);

// Trapezoidal mass-lumped inner product on the current polygon,
// (u,v)^h = 1/2 sum_j |h_j| [ (uv)(rho_j^-) + (uv)(rho_{j-1}^+) ].
// For nodal (continuous) fields this reduces to sum_j m_j u_j v_j with the
// lumped vertex masses m_j = (|h_j| + |h_{j+1}|)/2.
double lumped_inner_product(const ClosedPolygon& poly, const NodalScalarField& u,
                            const NodalScalarField& v);
double lumped_inner_product(const ClosedPolygon& poly, const NodalVectorField& u,
                            const NodalVectorField& v);

// Lumped vertex masses m_j.
std::vector<double> lumped_masses(const ClosedPolygon& poly);

// (d_s u, d_s v) over the polygon: sum_j (u_j - u_{j-1})(v_j - v_{j-1}) / |h_j|.
double stiffness_pairing(const ClosedPolygon& poly, const NodalScalarField& u,
                         const NodalScalarField& v);
double stiffness_pairing(const ClosedPolygon& poly, const NodalVectorField& u,
                         const NodalVectorField& v);

// Weighted vertex normal omega_j = (|h_j| n_j + |h_{j+1}| n_{j+1})/2, the
// closed-form reduction of the lumped pairing: (v.n^h, phi_j)^h = v_j . omega_j
// for every continuous piecewise-linear vector field v.
std::vector<Vec2> weighted_normals(const ClosedPolygon& poly);
std::vector<Vec2> weighted_normals(const CurveEdges& edges);

// Initial curvature from the weak form kappa n = -d_ss X: least-squares
// solution of kappa_j omega_j = (d_s X, d_s phi_j e_k), k in {x,y}. The
// normal equations decouple per vertex; throws SingularNormalEquations if
// some omega_j vanishes.
NodalScalarField init_curvature(const ClosedPolygon& poly);

double perimeter(const ClosedPolygon& poly);
// Absolute shoelace area: positive and orientation-independent.
double enclosed_area(const ClosedPolygon& poly);
// Region centroid of a simple polygon.
Vec2 area_centroid(const ClosedPolygon& poly);
// max_j |h_j| / min_j |h_j| >= 1; throws ZeroEdge.
double mesh_ratio(const ClosedPolygon& poly);

// Curvature constant kappa^c that makes the regular N-gon with edge length
// edge_len a fixed point of the surface-diffusion schemes:
// kappa^c = 2 sin(alpha) / ((1 + cos(alpha)) edge_len), alpha = 2 pi / N.
double regular_polygon_equilibrium_curvature(int n, double edge_len);

// Exact self-intersection test (snapped integer predicates); true if every
// pair of non-adjacent edges is disjoint.
bool is_simple(const ClosedPolygon& poly);

// Text format: first line N, then N lines "x y" at full double precision,
// clockwise order.
void write_polygon(std::ostream& os, const ClosedPolygon& poly);
void write_polygon_file(const std::string& path, const ClosedPolygon& poly);
ClosedPolygon read_polygon(std::istream& is);
ClosedPolygon read_polygon_file(const std::string& path);

}  // namespace geoflow
