#include "geoflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "snap_grid.hpp"

namespace geoflow {

namespace {

double signed_shoelace(const std::vector<Vec2>& v) {
  double s = 0.0;
  const int n = static_cast<int>(v.size());
  for (int j = 0; j < n; ++j) {
    const Vec2& a = v[j];
    const Vec2& b = v[(j + 1) % n];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * s;
}

void check_field(const ClosedPolygon& poly, size_t len) {
  if (len != static_cast<size_t>(poly.size()))
    throw DimensionMismatch("nodal field length " + std::to_string(len) +
                            " does not match vertex count " + std::to_string(poly.size()));
}

}  // namespace

ClosedPolygon::ClosedPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
  if (verts_.size() < 3)
    throw InvalidArgument("polygon needs at least 3 vertices, got " +
                          std::to_string(verts_.size()));
  for (const auto& v : verts_)
    if (!std::isfinite(v.x()) || !std::isfinite(v.y()))
      throw InvalidArgument("polygon vertex is not finite");
  // Store clockwise, keeping the first vertex in place.
  if (signed_shoelace(verts_) > 0.0) std::reverse(verts_.begin() + 1, verts_.end());
}

ClosedPolygon ClosedPolygon::from_clockwise(std::vector<Vec2> vertices) {
  if (vertices.size() >= 3 && signed_shoelace(vertices) > 0.0)
    throw InvalidArgument("vertex loop is counterclockwise; mesh may have inverted");
  ClosedPolygon p(std::move(vertices));
  return p;
}

double ClosedPolygon::diameter() const {
  double lox = verts_[0].x(), hix = lox, loy = verts_[0].y(), hiy = loy;
  for (const auto& v : verts_) {
    lox = std::min(lox, v.x());
    hix = std::max(hix, v.x());
    loy = std::min(loy, v.y());
    hiy = std::max(hiy, v.y());
  }
  return std::hypot(hix - lox, hiy - loy);
}

CurveEdges edge_data(const ClosedPolygon& poly) {
  const int n = poly.size();
  CurveEdges e;
  e.h.resize(n);
  e.len.resize(n);
  e.normal.resize(n);
  for (int j = 0; j < n; ++j) {
    // Edge j runs from vertex j-1 to vertex j.
    const Vec2 h = poly.vertex(j) - poly.vertex((j + n - 1) % n);
    const double len = h.norm();
    if (len == 0.0) throw ZeroEdge("zero-length edge at index " + std::to_string(j));
    e.h[j] = h;
    e.len[j] = len;
    e.normal[j] = -perp(h) / len;
  }
  return e;
}

std::vector<double> lumped_masses(const ClosedPolygon& poly) {
  const CurveEdges e = edge_data(poly);
  const int n = poly.size();
  std::vector<double> m(n);
  for (int j = 0; j < n; ++j) m[j] = 0.5 * (e.len[j] + e.len[(j + 1) % n]);
  return m;
}

double lumped_inner_product(const ClosedPolygon& poly, const NodalScalarField& u,
                            const NodalScalarField& v) {
  check_field(poly, u.size());
  check_field(poly, v.size());
  const std::vector<double> m = lumped_masses(poly);
  double s = 0.0;
  for (int j = 0; j < poly.size(); ++j) s += m[j] * u[j] * v[j];
  return s;
}

double lumped_inner_product(const ClosedPolygon& poly, const NodalVectorField& u,
                            const NodalVectorField& v) {
  check_field(poly, u.size());
  check_field(poly, v.size());
  const std::vector<double> m = lumped_masses(poly);
  double s = 0.0;
  for (int j = 0; j < poly.size(); ++j) s += m[j] * u[j].dot(v[j]);
  return s;
}

double stiffness_pairing(const ClosedPolygon& poly, const NodalScalarField& u,
                         const NodalScalarField& v) {
  check_field(poly, u.size());
  check_field(poly, v.size());
  const CurveEdges e = edge_data(poly);
  const int n = poly.size();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jm = (j + n - 1) % n;
    s += (u[j] - u[jm]) * (v[j] - v[jm]) / e.len[j];
  }
  return s;
}

double stiffness_pairing(const ClosedPolygon& poly, const NodalVectorField& u,
                         const NodalVectorField& v) {
  check_field(poly, u.size());
  check_field(poly, v.size());
  const CurveEdges e = edge_data(poly);
  const int n = poly.size();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jm = (j + n - 1) % n;
    s += (u[j] - u[jm]).dot(v[j] - v[jm]) / e.len[j];
  }
  return s;
}

std::vector<Vec2> weighted_normals(const CurveEdges& e) {
  const int n = static_cast<int>(e.len.size());
  std::vector<Vec2> w(n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    w[j] = 0.5 * (e.len[j] * e.normal[j] + e.len[jp] * e.normal[jp]);
  }
  return w;
}

std::vector<Vec2> weighted_normals(const ClosedPolygon& poly) {
  return weighted_normals(edge_data(poly));
}

NodalScalarField init_curvature(const ClosedPolygon& poly) {
  const CurveEdges e = edge_data(poly);
  const std::vector<Vec2> omega = weighted_normals(e);
  const int n = poly.size();
  NodalScalarField kappa(n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    // (d_s X, d_s phi_j e_k) = (t_j - t_{j+1})_k with unit edge tangents t.
    const Vec2 b = e.h[j] / e.len[j] - e.h[jp] / e.len[jp];
    const double w2 = omega[j].squaredNorm();
    if (w2 == 0.0)
      throw SingularNormalEquations("vanishing weighted normal at vertex " + std::to_string(j));
    kappa[j] = omega[j].dot(b) / w2;
  }
  return kappa;
}

double perimeter(const ClosedPolygon& poly) {
  const CurveEdges e = edge_data(poly);
  double s = 0.0;
  for (double l : e.len) s += l;
  return s;
}

double enclosed_area(const ClosedPolygon& poly) {
  return std::abs(signed_shoelace(poly.vertices()));
}

Vec2 area_centroid(const ClosedPolygon& poly) {
  const auto& v = poly.vertices();
  const int n = poly.size();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (int j = 0; j < n; ++j) {
    const Vec2& p = v[j];
    const Vec2& q = v[(j + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    a += w;
    c += w * (p + q);
  }
  if (a == 0.0) throw InvalidArgument("polygon has zero area; centroid undefined");
  return c / (3.0 * a);
}

double mesh_ratio(const ClosedPolygon& poly) {
  const CurveEdges e = edge_data(poly);
  const auto [lo, hi] = std::minmax_element(e.len.begin(), e.len.end());
  return *hi / *lo;
}

double regular_polygon_equilibrium_curvature(int n, double edge_len) {
  const double alpha = 2.0 * std::numbers::pi / n;
  return 2.0 * std::sin(alpha) / ((1.0 + std::cos(alpha)) * edge_len);
}

bool is_simple(const ClosedPolygon& poly) {
  const detail::SnapFrame frame = detail::make_snap_frame({&poly});
  const std::vector<detail::IPoint> snapped = detail::snap_polygon(frame, poly);
  return !detail::has_self_intersection(snapped);
}

void write_polygon(std::ostream& os, const ClosedPolygon& poly) {
  os << poly.size() << "\n";
  char buf[64];
  for (const auto& v : poly.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
    os << buf;
  }
}

void write_polygon_file(const std::string& path, const ClosedPolygon& poly) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open for writing: " + path);
  write_polygon(os, poly);
}

ClosedPolygon read_polygon(std::istream& is) {
  int n = 0;
  if (!(is >> n) || n < 3) throw InvalidArgument("polygon file: bad vertex count");
  std::vector<Vec2> verts(n);
  for (int j = 0; j < n; ++j)
    if (!(is >> verts[j].x() >> verts[j].y()))
      throw InvalidArgument("polygon file: truncated at vertex " + std::to_string(j));
  return ClosedPolygon(std::move(verts));
}

ClosedPolygon read_polygon_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open: " + path);
  return read_polygon(is);
}

}  // namespace geoflow
