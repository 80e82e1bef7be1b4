#include "snap_grid.hpp"

#include <cmath>
#include <limits>

namespace geoflow::detail {

SnapFrame make_snap_frame(const std::vector<const ClosedPolygon*>& polys) {
  double lox = std::numeric_limits<double>::infinity(), loy = lox;
  double hix = -lox, hiy = -loy;
  for (const auto* p : polys) {
    for (const auto& v : p->vertices()) {
      lox = std::min(lox, v.x());
      hix = std::max(hix, v.x());
      loy = std::min(loy, v.y());
      hiy = std::max(hiy, v.y());
    }
  }
  SnapFrame f;
  f.x0 = lox;
  f.y0 = loy;
  const double extent = std::max({hix - lox, hiy - loy, 1e-300});
  f.scale = std::ldexp(1.0, 40) / extent;
  return f;
}

std::vector<IPoint> snap_polygon(const SnapFrame& frame, const ClosedPolygon& poly) {
  std::vector<IPoint> out;
  out.reserve(poly.size());
  for (const auto& v : poly.vertices()) out.push_back(frame.snap(v));
  return out;
}

EdgeGrid::EdgeGrid(const std::vector<IPoint>& pts, int target_cells_per_axis)
    : pts_(&pts), n_(static_cast<int>(pts.size())) {
  res_ = std::max(1, target_cells_per_axis);
  std::int64_t lox = pts[0].x, hix = pts[0].x, loy = pts[0].y, hiy = pts[0].y;
  for (const auto& p : pts) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  minx_ = lox;
  miny_ = loy;
  const double extent = std::max<double>(std::max(hix - lox, hiy - loy), 1.0);
  inv_cell_ = double(res_) / (extent * (1.0 + 1e-12));
  cells_.assign(static_cast<size_t>(res_) * res_, {});
  for (int e = 0; e < n_; ++e) {
    const IPoint& a = pts[e];
    const IPoint& b = pts[(e + 1) % n_];
    int cx0, cx1, cy0, cy1;
    cell_range(std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y),
               cx0, cx1, cy0, cy1);
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx) cells_[size_t(cy) * res_ + cx].push_back(e);
  }
  stamp_.assign(n_, -1);
}

void EdgeGrid::cell_range(std::int64_t lox, std::int64_t hix, std::int64_t loy, std::int64_t hiy,
                          int& cx0, int& cx1, int& cy0, int& cy1) const {
  auto clampi = [this](double v) { return std::min(res_ - 1, std::max(0, int(v))); };
  cx0 = clampi(double(lox - minx_) * inv_cell_);
  cx1 = clampi(double(hix - minx_) * inv_cell_);
  cy0 = clampi(double(loy - miny_) * inv_cell_);
  cy1 = clampi(double(hiy - miny_) * inv_cell_);
}

void EdgeGrid::candidates(const IPoint& a, const IPoint& b, std::vector<int>& out) const {
  out.clear();
  ++stamp_val_;
  int cx0, cx1, cy0, cy1;
  cell_range(std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y),
             cx0, cx1, cy0, cy1);
  for (int cy = cy0; cy <= cy1; ++cy)
    for (int cx = cx0; cx <= cx1; ++cx)
      for (int e : cells_[size_t(cy) * res_ + cx])
        if (stamp_[e] != stamp_val_) {
          stamp_[e] = stamp_val_;
          out.push_back(e);
        }
}

void EdgeGrid::ray_candidates(const IPoint& p, std::vector<int>& out) const {
  out.clear();
  ++stamp_val_;
  int cx0, cx1, cy0, cy1;
  cell_range(p.x, std::numeric_limits<std::int64_t>::max() / 4, p.y, p.y, cx0, cx1, cy0, cy1);
  for (int cy = cy0; cy <= cy1; ++cy)
    for (int cx = cx0; cx <= res_ - 1; ++cx)
      for (int e : cells_[size_t(cy) * res_ + cx])
        if (stamp_[e] != stamp_val_) {
          stamp_[e] = stamp_val_;
          out.push_back(e);
        }
}

int point_in_polygon(const std::vector<IPoint>& poly, const EdgeGrid& grid, const IPoint& p) {
  const int n = static_cast<int>(poly.size());
  std::vector<int> cand;
  grid.ray_candidates(p, cand);
  int crossings = 0;
  for (int e : cand) {
    const IPoint& a = poly[e];
    const IPoint& b = poly[(e + 1) % n];
    if (on_segment(a, b, p)) return 0;
    // Half-open rule in y so a ray through a vertex counts once.
    const bool a_below = a.y <= p.y, b_below = b.y <= p.y;
    if (a_below == b_below) continue;
    // Edge crosses the horizontal through p; it crosses strictly right of p
    // iff x_int - p.x = orient(a,b,p)/(b.y - a.y) > 0. orient cannot be zero
    // here: that would put p on the segment, handled above.
    const int o = orient(a, b, p);
    const int dir = (b.y > a.y) ? 1 : -1;
    if (o * dir > 0) ++crossings;
  }
  return (crossings & 1) ? 1 : -1;
}

bool has_self_intersection(const std::vector<IPoint>& poly) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) return true;
  // Folded adjacent edges (spikes) first: the far ends must not lie on the
  // neighboring edge.
  for (int i = 0; i < n; ++i) {
    const IPoint& a = poly[i];
    const IPoint& v = poly[(i + 1) % n];
    const IPoint& d = poly[(i + 2) % n];
    if (a == v || v == d) return true;
    if (orient(a, v, d) == 0 && (on_segment(a, v, d) || on_segment(v, d, a))) return true;
  }
  EdgeGrid grid(poly, std::max(8, static_cast<int>(std::sqrt(double(n)))));
  std::vector<int> cand;
  for (int i = 0; i < n; ++i) {
    const IPoint& a = poly[i];
    const IPoint& b = poly[(i + 1) % n];
    grid.candidates(a, b, cand);
    for (int j : cand) {
      if (j <= i) continue;  // each unordered pair once
      const bool adjacent = (j == (i + 1) % n) || ((j + 1) % n == i);
      if (adjacent) continue;
      const SegCross c = segment_intersection(a, b, poly[j], poly[(j + 1) % n]);
      if (c != SegCross::None) return true;
    }
  }
  return false;
}

}  // namespace geoflow::detail
