#pragma once

// Shared test helpers: seeded random shape generators and small independent
// oracles. Everything here is deliberately implemented from the definitions,
// not via the library's own assembly paths.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "geoflow/curve.hpp"

namespace gftest {

using geoflow::ClosedPolygon;
using geoflow::Vec2;

inline constexpr double kPi = std::numbers::pi;

// Star-shaped (hence simple) polygon around a random center.
inline ClosedPolygon random_star_polygon(std::mt19937_64& rng, int n, double rmin = 0.5,
                                         double rmax = 1.5) {
  std::uniform_real_distribution<double> ur(rmin, rmax);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  const Vec2 center(uc(rng), uc(rng));
  // Jittered uniform angles: strictly increasing with a guaranteed gap, so
  // the polygon is star-shaped about the center and therefore simple.
  std::vector<double> angles(n);
  std::uniform_real_distribution<double> jit(-0.4, 0.4);
  for (int i = 0; i < n; ++i) angles[i] = 2.0 * kPi * (i + 0.5 + jit(rng)) / n;
  std::vector<Vec2> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = center + ur(rng) * Vec2(std::cos(angles[i]), std::sin(angles[i]));
  return ClosedPolygon(std::move(v));
}

// Convex polygon: hull of random points (monotone chain).
inline ClosedPolygon random_convex_polygon(std::mt19937_64& rng, int points = 40) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> pts(points);
  for (auto& p : pts) p = Vec2(u(rng), u(rng) * 0.8 + 0.1 * u(rng));
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vec2> hull(2 * pts.size());
  int k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (int i = int(pts.size()) - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return ClosedPolygon(std::move(hull));
}

// Direct evaluation of the trapezoidal lumped product for nodal fields,
// summed edge by edge (the defining formula).
inline double lumped_product_oracle(const ClosedPolygon& poly, const std::vector<double>& u,
                                    const std::vector<double>& v) {
  const int n = poly.size();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jm = (j + n - 1) % n;
    const double len = (poly.vertex(j) - poly.vertex(jm)).norm();
    s += 0.5 * len * (u[j] * v[j] + u[jm] * v[jm]);
  }
  return s;
}

// Exact integral of (d_s u)(d_s v) edge by edge for piecewise-linear u, v.
inline double stiffness_oracle(const ClosedPolygon& poly, const std::vector<double>& u,
                               const std::vector<double>& v) {
  const int n = poly.size();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jm = (j + n - 1) % n;
    const double len = (poly.vertex(j) - poly.vertex(jm)).norm();
    s += (u[j] - u[jm]) * (v[j] - v[jm]) / len;
  }
  return s;
}

}  // namespace gftest
