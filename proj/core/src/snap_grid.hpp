#pragma once

// Internal: polygons snapped to an integer grid so that orientation and
// point-on-segment predicates are exact (evaluated in 128-bit integers).
// The grid spans the joint bounding box scaled to 2^40, which keeps the
// snapping displacement around 1e-12 of the geometry scale.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "geoflow/curve.hpp"

namespace geoflow::detail {

struct IPoint {
  std::int64_t x = 0, y = 0;
  friend bool operator==(const IPoint& a, const IPoint& b) = default;
};

using int128 = __int128;

inline int sgn(int128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Sign of the cross product (b-a) x (c-a); exact.
inline int orient(const IPoint& a, const IPoint& b, const IPoint& c) {
  const int128 abx = int128(b.x) - a.x, aby = int128(b.y) - a.y;
  const int128 acx = int128(c.x) - a.x, acy = int128(c.y) - a.y;
  return sgn(abx * acy - aby * acx);
}

inline bool bbox_overlap(const IPoint& a, const IPoint& b, const IPoint& c, const IPoint& d) {
  return std::min(a.x, b.x) <= std::max(c.x, d.x) && std::min(c.x, d.x) <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= std::max(c.y, d.y) && std::min(c.y, d.y) <= std::max(a.y, b.y);
}

// p collinear with [a,b] and inside its bounding box.
inline bool on_segment(const IPoint& a, const IPoint& b, const IPoint& p) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

enum class SegCross { None, Proper, Degenerate };

// Proper = interiors cross transversally; Degenerate = any touching,
// collinear overlap or shared endpoint.
inline SegCross segment_intersection(const IPoint& a, const IPoint& b, const IPoint& c,
                                     const IPoint& d) {
  if (!bbox_overlap(a, b, c, d)) return SegCross::None;
  const int d1 = orient(c, d, a);
  const int d2 = orient(c, d, b);
  const int d3 = orient(a, b, c);
  const int d4 = orient(a, b, d);
  if (d1 * d2 < 0 && d3 * d4 < 0) return SegCross::Proper;
  if (d1 == 0 && on_segment(c, d, a)) return SegCross::Degenerate;
  if (d2 == 0 && on_segment(c, d, b)) return SegCross::Degenerate;
  if (d3 == 0 && on_segment(a, b, c)) return SegCross::Degenerate;
  if (d4 == 0 && on_segment(a, b, d)) return SegCross::Degenerate;
  return SegCross::None;
}

struct SnapFrame {
  double x0 = 0, y0 = 0;  // bbox lower corner
  double scale = 1;       // grid units per length unit
  IPoint snap(const Vec2& p) const {
    return IPoint{static_cast<std::int64_t>(std::llround((p.x() - x0) * scale)),
                  static_cast<std::int64_t>(std::llround((p.y() - y0) * scale))};
  }
  Vec2 unsnap(const IPoint& p) const {
    return Vec2(x0 + double(p.x) / scale, y0 + double(p.y) / scale);
  }
};

// Frame covering all supplied polygons with the longer bbox side at 2^40.
SnapFrame make_snap_frame(const std::vector<const ClosedPolygon*>& polys);

std::vector<IPoint> snap_polygon(const SnapFrame& frame, const ClosedPolygon& poly);

// Uniform grid over snapped edges for candidate pruning.
class EdgeGrid {
 public:
  EdgeGrid(const std::vector<IPoint>& pts, int target_cells_per_axis);

  // Indices of edges whose bbox intersects the bbox of [a,b]; deduplicated.
  void candidates(const IPoint& a, const IPoint& b, std::vector<int>& out) const;
  // Indices of edges whose bbox intersects the +x ray from p.
  void ray_candidates(const IPoint& p, std::vector<int>& out) const;

  const std::vector<IPoint>& points() const { return *pts_; }

 private:
  void cell_range(std::int64_t lox, std::int64_t hix, std::int64_t loy, std::int64_t hiy,
                  int& cx0, int& cx1, int& cy0, int& cy1) const;

  const std::vector<IPoint>* pts_;
  int n_ = 0;
  int res_ = 1;
  std::int64_t minx_ = 0, miny_ = 0;
  double inv_cell_ = 0;
  std::vector<std::vector<int>> cells_;
  mutable std::vector<int> stamp_;
  mutable int stamp_val_ = 0;
};

// Exact even-odd point-in-polygon on the lattice. Returns +1 inside,
// -1 outside, 0 on the boundary.
int point_in_polygon(const std::vector<IPoint>& poly, const EdgeGrid& grid, const IPoint& p);

// True if some pair of non-adjacent edges intersects or touches.
bool has_self_intersection(const std::vector<IPoint>& poly);

}  // namespace geoflow::detail
