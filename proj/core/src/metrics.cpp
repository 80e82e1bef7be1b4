#include "geoflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "snap_grid.hpp"

namespace geoflow {

namespace {

using detail::EdgeGrid;
using detail::IPoint;
using detail::int128;

bool same_point(const Vec2& a, const Vec2& b) { return a.x() == b.x() && a.y() == b.y(); }

bool same_loop(const ClosedPolygon& a, const ClosedPolygon& b) {
  if (a.size() != b.size()) return false;
  const int n = a.size();
  for (int shift = 0; shift < n; ++shift) {
    if (!same_point(b.vertex(shift), a.vertex(0))) continue;
    bool match = true;
    for (int j = 0; j < n && match; ++j)
      match = same_point(b.vertex((shift + j) % n), a.vertex(j));
    if (match) return true;
  }
  return false;
}

std::vector<IPoint> dedup(std::vector<IPoint> pts) {
  std::vector<IPoint> out;
  out.reserve(pts.size());
  for (const IPoint& p : pts)
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

// Exact shoelace area of a lattice polygon, in lattice units^2.
double lattice_area(const std::vector<IPoint>& p) {
  int128 s = 0;
  const int n = static_cast<int>(p.size());
  for (int j = 0; j < n; ++j) {
    const IPoint& a = p[j];
    const IPoint& b = p[(j + 1) % n];
    s += int128(a.x) * b.y - int128(b.x) * a.y;
  }
  const double v = double(s) / 2.0;
  return std::abs(v);
}

bool clockwise_lattice(const std::vector<IPoint>& p) {
  int128 s = 0;
  const int n = static_cast<int>(p.size());
  for (int j = 0; j < n; ++j) {
    const IPoint& a = p[j];
    const IPoint& b = p[(j + 1) % n];
    s += int128(a.x) * b.y - int128(b.x) * a.y;
  }
  return s < 0;
}

struct PassResult {
  double integral = 0.0;  // int x dy over the pieces of dA inside B, stored orientation
  bool degenerate = false;
};

// Integrates x dy along the edges of A restricted to the closed region
// bounded by B. All topology decisions are exact; only the crossing
// parameters are rounded.
PassResult boundary_inside_integral(const std::vector<IPoint>& A, const std::vector<IPoint>& B,
                                    const EdgeGrid& bgrid) {
  PassResult res;
  const int n = static_cast<int>(A.size());
  const int m = static_cast<int>(B.size());
  std::vector<int> cand;
  std::vector<double> ts;
  for (int i = 0; i < n; ++i) {
    const IPoint& a = A[i];
    const IPoint& b = A[(i + 1) % n];
    const int state0 = detail::point_in_polygon(B, bgrid, a);
    if (state0 == 0) {
      res.degenerate = true;
      return res;
    }
    ts.clear();
    bgrid.candidates(a, b, cand);
    for (int e : cand) {
      const IPoint& c = B[e];
      const IPoint& d = B[(e + 1) % m];
      const detail::SegCross cls = detail::segment_intersection(a, b, c, d);
      if (cls == detail::SegCross::None) continue;
      if (cls == detail::SegCross::Degenerate) {
        res.degenerate = true;
        return res;
      }
      const int128 d1 = int128(d.x - c.x) * (a.y - c.y) - int128(d.y - c.y) * (a.x - c.x);
      const int128 d2 = int128(d.x - c.x) * (b.y - c.y) - int128(d.y - c.y) * (b.x - c.x);
      ts.push_back(double(d1) / (double(d1) - double(d2)));
    }
    std::sort(ts.begin(), ts.end());
    const double ax = double(a.x), ay = double(a.y);
    const double dx = double(b.x) - ax, dy = double(b.y) - ay;
    bool inside = state0 > 0;
    double prev = 0.0;
    for (double t : ts) {
      if (inside) {
        const double x0 = ax + prev * dx, y0 = ay + prev * dy;
        const double x1 = ax + t * dx, y1 = ay + t * dy;
        res.integral += 0.5 * (x0 + x1) * (y1 - y0);
      }
      inside = !inside;
      prev = t;
    }
    if (inside) {
      const double x0 = ax + prev * dx, y0 = ay + prev * dy;
      res.integral += 0.5 * (x0 + double(b.x)) * (double(b.y) - y0);
    }
    // Exactness check: parity along the edge must agree with the endpoint.
    const int state1 = detail::point_in_polygon(B, bgrid, b);
    if (state1 == 0 || (inside != (state1 > 0))) {
      res.degenerate = true;
      return res;
    }
  }
  return res;
}

}  // namespace

double manifold_distance_2d(const ClosedPolygon& g1, const ClosedPolygon& g2) {
  if (same_loop(g1, g2)) return 0.0;

  const detail::SnapFrame frame = detail::make_snap_frame({&g1, &g2});
  std::vector<IPoint> p = dedup(detail::snap_polygon(frame, g1));
  std::vector<IPoint> q0 = dedup(detail::snap_polygon(frame, g2));
  if (p.size() < 3 || q0.size() < 3)
    throw NonSimplePolygon("polygon collapses under snapping");
  if (detail::has_self_intersection(p) || detail::has_self_intersection(q0))
    throw NonSimplePolygon();

  const double a1 = lattice_area(p);
  const double a2 = lattice_area(q0);

  // Degenerate contact between the two loops (shared vertices, overlapping
  // edges) is resolved by translating one loop a few lattice units; a pure
  // lattice translation leaves both areas exact.
  static constexpr std::int64_t kShift[][2] = {{0, 0},   {3, 1},   {-2, 5},  {7, -3},
                                               {-11, 6}, {13, 17}, {-19, 23}, {29, -31}};
  double inter = 0.0;
  bool ok = false;
  for (const auto& sh : kShift) {
    std::vector<IPoint> q = q0;
    for (IPoint& pt : q) {
      pt.x += sh[0];
      pt.y += sh[1];
    }
    EdgeGrid pgrid(p, std::max(8, int(std::sqrt(double(p.size())))));
    EdgeGrid qgrid(q, std::max(8, int(std::sqrt(double(q.size())))));
    const PassResult rp = boundary_inside_integral(p, q, qgrid);
    if (rp.degenerate) continue;
    const PassResult rq = boundary_inside_integral(q, p, pgrid);
    if (rq.degenerate) continue;
    double s = rp.integral + rq.integral;
    // The stored loops are clockwise on the lattice; Green's theorem wants
    // counterclockwise traversal.
    if (clockwise_lattice(p)) s = -s;
    inter = s;
    ok = true;
    break;
  }
  if (!ok)
    throw ClassificationFailure(
        "polygon overlay stayed degenerate under perturbation");

  const double scale2 = frame.scale * frame.scale;
  const double m = (a1 + a2 - 2.0 * inter) / scale2;
  return std::max(0.0, m);
}

// ---------------------------------------------------------------------------
// 3D sampled symmetric difference.
// ---------------------------------------------------------------------------

namespace {

struct MeshColumns {
  // Per grid cell, the faces whose (y,z) bbox overlaps it.
  std::vector<std::vector<int>> buckets;
  std::vector<double> face_size2;  // squared max edge length per face
  const TriangleSurface* mesh = nullptr;
  int res = 0;
  double y0 = 0, z0 = 0, hy = 0, hz = 0;

  void build(const TriangleSurface& m, int resolution, double y0_, double z0_, double hy_,
             double hz_) {
    mesh = &m;
    res = resolution;
    y0 = y0_;
    z0 = z0_;
    hy = hy_;
    hz = hz_;
    buckets.assign(size_t(res) * res, {});
    face_size2.resize(m.face_count());
    auto cell = [&](double v, double lo, double h) {
      return std::min(res - 1, std::max(0, int((v - lo) / h)));
    };
    for (int f = 0; f < m.face_count(); ++f) {
      const auto& t = m.faces()[f];
      face_size2[f] = std::max({(m.vertex(t[0]) - m.vertex(t[1])).squaredNorm(),
                                (m.vertex(t[1]) - m.vertex(t[2])).squaredNorm(),
                                (m.vertex(t[2]) - m.vertex(t[0])).squaredNorm()});
      double ylo = m.vertex(t[0]).y(), yhi = ylo, zlo = m.vertex(t[0]).z(), zhi = zlo;
      for (int k = 1; k < 3; ++k) {
        ylo = std::min(ylo, m.vertex(t[k]).y());
        yhi = std::max(yhi, m.vertex(t[k]).y());
        zlo = std::min(zlo, m.vertex(t[k]).z());
        zhi = std::max(zhi, m.vertex(t[k]).z());
      }
      for (int cz = cell(zlo, z0, hz); cz <= cell(zhi, z0, hz); ++cz)
        for (int cy = cell(ylo, y0, hy); cy <= cell(yhi, y0, hy); ++cy)
          buckets[size_t(cz) * res + cy].push_back(f);
    }
  }

  // Crossing x-values of the line {(x, y, z)} with the mesh. Returns false
  // if a crossing is ambiguous (line grazes an edge) or parity is odd.
  bool crossings(int cy, int cz, double y, double z, std::vector<double>& xs) const {
    xs.clear();
    const auto& faces = mesh->faces();
    for (int f : buckets[size_t(cz) * res + cy]) {
      const Vec3& a = mesh->vertex(faces[f][0]);
      const Vec3& b = mesh->vertex(faces[f][1]);
      const Vec3& c = mesh->vertex(faces[f][2]);
      // 2D barycentric weights in the (y,z) projection.
      const double wa = (b.y() - y) * (c.z() - z) - (b.z() - z) * (c.y() - y);
      const double wb = (c.y() - y) * (a.z() - z) - (c.z() - z) * (a.y() - y);
      const double wc = (a.y() - y) * (b.z() - z) - (a.z() - z) * (b.y() - y);
      const double det = wa + wb + wc;
      const double scale = std::abs(wa) + std::abs(wb) + std::abs(wc);
      if (std::abs(det) <= 1e-9 * std::max(scale, 1e-300)) {
        // Face (nearly) parallel to the line: it cannot be crossed
        // transversally. Ambiguous only when the point sits on the projected
        // segment, where |w| ~ distance * edge length.
        if (scale <= 1e-9 * face_size2[f]) return false;  // retry with jitter
        continue;
      }
      const bool inside = (wa > 0 && wb > 0 && wc > 0) || (wa < 0 && wb < 0 && wc < 0);
      const double margin = std::min({std::abs(wa), std::abs(wb), std::abs(wc)});
      if (margin <= 1e-9 * scale) return false;  // grazing an edge: retry
      if (!inside) continue;
      xs.push_back((wa * a.x() + wb * b.x() + wc * c.x()) / det);
    }
    if (xs.size() % 2 != 0) return false;
    std::sort(xs.begin(), xs.end());
    return true;
  }
};

double symdiff_length(const std::vector<double>& xs1, const std::vector<double>& xs2) {
  // Both are sorted even-length crossing lists (interval endpoints).
  size_t i = 0, j = 0;
  bool in1 = false, in2 = false;
  double last = -std::numeric_limits<double>::infinity();
  double len = 0.0;
  while (i < xs1.size() || j < xs2.size()) {
    double next;
    bool from1;
    if (j >= xs2.size() || (i < xs1.size() && xs1[i] <= xs2[j])) {
      next = xs1[i];
      from1 = true;
    } else {
      next = xs2[j];
      from1 = false;
    }
    if (in1 != in2) len += next - last;
    if (from1) {
      in1 = !in1;
      ++i;
    } else {
      in2 = !in2;
      ++j;
    }
    last = next;
  }
  return len;
}

double sampled_symdiff(const TriangleSurface& g1, const TriangleSurface& g2, int res) {
  Vec3 lo = g1.vertices()[0], hi = lo;
  for (const auto* m : {&g1, &g2})
    for (const auto& v : m->vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  const double hy = std::max((hi.y() - lo.y()) / res, 1e-300);
  const double hz = std::max((hi.z() - lo.z()) / res, 1e-300);

  MeshColumns c1, c2;
  c1.build(g1, res, lo.y(), lo.z(), hy, hz);
  c2.build(g2, res, lo.y(), lo.z(), hy, hz);

  static constexpr double kJitter[] = {0.0, 0.2318, -0.3141, 0.4159, -0.1617, 0.0729};
  std::vector<double> xs1, xs2;
  double total = 0.0;
  for (int cz = 0; cz < res; ++cz) {
    for (int cy = 0; cy < res; ++cy) {
      bool done = false;
      for (double jit : kJitter) {
        const double y = lo.y() + (cy + 0.5 + jit) * hy;
        const double z = lo.z() + (cz + 0.5 + 0.7 * jit) * hz;
        if (!c1.crossings(cy, cz, y, z, xs1)) continue;
        if (!c2.crossings(cy, cz, y, z, xs2)) continue;
        total += symdiff_length(xs1, xs2);
        done = true;
        break;
      }
      if (!done)
        throw ClassificationFailure("ray parity inconsistent at column (" + std::to_string(cy) +
                                    "," + std::to_string(cz) + ")");
    }
  }
  return total * hy * hz;
}

}  // namespace

SampledVolume manifold_distance_3d(const TriangleSurface& g1, const TriangleSurface& g2,
                                   int resolution) {
  if (resolution < 64) throw InvalidArgument("resolution must be at least 64");
  SampledVolume out;
  out.value = sampled_symdiff(g1, g2, resolution);
  const double coarse = sampled_symdiff(g1, g2, resolution / 2);
  out.refinement_delta = std::abs(out.value - coarse);
  return out;
}

ErrorTable convergence_table(const std::vector<std::pair<double, double>>& tau_error) {
  if (tau_error.size() < 2) throw InvalidArgument("need at least two (tau, error) rows");
  ErrorTable t;
  for (size_t i = 0; i < tau_error.size(); ++i) {
    const auto [tau, err] = tau_error[i];
    if (!(err > 0.0)) throw NonPositiveError();
    if (i > 0 && !(tau < tau_error[i - 1].first))
      throw InvalidArgument("tau must be strictly decreasing");
    ErrorRow row{tau, err, std::numeric_limits<double>::quiet_NaN()};
    if (i > 0)
      row.order = std::log(tau_error[i - 1].second / err) / std::log(tau_error[i - 1].first / tau);
    t.rows.push_back(row);
  }
  return t;
}

void write_error_table(std::ostream& os, const ErrorTable& table) {
  os << "tau,error,order\n";
  char buf[128];
  for (const auto& r : table.rows) {
    if (std::isnan(r.order))
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,\n", r.tau, r.error);
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.6f\n", r.tau, r.error, r.order);
    os << buf;
  }
}

void write_error_table_file(const std::string& path, const ErrorTable& table) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open for writing: " + path);
  write_error_table(os, table);
}

double fitted_order(const ErrorTable& table) {
  const size_t n = table.rows.size();
  if (n < 2) throw InvalidArgument("need at least two rows to fit an order");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : table.rows) {
    const double x = std::log(r.tau), y = std::log(r.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace geoflow
