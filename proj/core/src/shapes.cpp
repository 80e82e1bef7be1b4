#include "geoflow/shapes.hpp"

#include <algorithm>

#include <Eigen/Geometry>
#include <cmath>
#include <map>
#include <numbers>

namespace geoflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ClosedPolygon polar_curve(int n, double (*radius)(double)) {
  if (n < 3) throw InvalidArgument("need at least 3 vertices");
  std::vector<Vec2> v(n);
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    v[j] = radius(t) * Vec2(std::cos(t), std::sin(t));
  }
  return ClosedPolygon(std::move(v));
}

double param_num(const std::map<std::string, std::string>& p, const std::string& key,
                 double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : std::stod(it->second);
}

int param_int(const std::map<std::string, std::string>& p, const std::string& key, int fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : std::stoi(it->second);
}

}  // namespace

ClosedPolygon make_ellipse(double a, double b, int n) {
  if (n < 3) throw InvalidArgument("need at least 3 vertices");
  std::vector<Vec2> v(n);
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    v[j] = Vec2(a * std::cos(t), b * std::sin(t));
  }
  return ClosedPolygon(std::move(v));
}

ClosedPolygon make_circle(double r, int n) { return make_ellipse(r, r, n); }

ClosedPolygon make_rectangle(double w, double h, int n) {
  if (n < 4) throw InvalidArgument("rectangle needs at least 4 vertices");
  const double per = 2.0 * (w + h);
  std::vector<Vec2> v(n);
  for (int j = 0; j < n; ++j) {
    double s = per * j / n;
    Vec2 p;
    if (s < w) {
      p = Vec2(s, 0.0);
    } else if (s < w + h) {
      p = Vec2(w, s - w);
    } else if (s < 2.0 * w + h) {
      p = Vec2(w - (s - w - h), h);
    } else {
      p = Vec2(0.0, h - (s - 2.0 * w - h));
    }
    v[j] = p - Vec2(0.5 * w, 0.5 * h);
  }
  return ClosedPolygon(std::move(v));
}

ClosedPolygon make_flower(int n) {
  return polar_curve(n, +[](double t) { return 1.0 + 0.4 * std::cos(6.0 * t); });
}

ClosedPolygon make_nonconvex(int n) {
  return polar_curve(n, +[](double t) { return 1.0 + 0.65 * std::cos(3.0 * t); });
}

namespace {

struct IcoBase {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
};

IcoBase icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoBase b;
  b.verts = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
             {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
             {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : b.verts) v.normalize();
  b.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return b;
}

}  // namespace

TriangleSurface make_icosphere(int frequency, double r, std::vector<long>* orbit_keys) {
  if (frequency < 1) throw InvalidArgument("icosphere frequency must be >= 1");
  const int nu = frequency;
  const IcoBase base = icosahedron();
  std::vector<Vec3> verts;
  std::vector<long> keys;
  std::vector<std::array<int, 3>> faces;
  // Shared vertices across base faces found by a keyed map on (corner ids,
  // barycentric integers), canonicalized so both owning faces agree.
  std::map<std::array<long, 6>, int> index;

  auto vertex_id = [&](const std::array<int, 3>& f, int i, int j) {
    const int k = nu - i - j;
    // Canonical key: (corner, weight) pairs with zero weights dropped, so
    // vertices on shared base edges and corners agree across faces.
    std::array<std::pair<int, int>, 3> cw = {
        std::make_pair(f[0], k), std::make_pair(f[1], i), std::make_pair(f[2], j)};
    std::sort(cw.begin(), cw.end());
    std::array<long, 6> key = {-1, -1, -1, -1, -1, -1};
    int slot = 0;
    for (const auto& [corner, weight] : cw)
      if (weight > 0) {
        key[slot++] = corner;
        key[slot++] = weight;
      }
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const Vec3 p = (double(k) * base.verts[f[0]] + double(i) * base.verts[f[1]] +
                    double(j) * base.verts[f[2]]) /
                   double(nu);
    verts.push_back(r * p.normalized());
    // Orbit key: the sorted barycentric multiset is invariant under the
    // icosahedral group for class-I geodesic subdivisions.
    std::array<int, 3> w = {k, i, j};
    std::sort(w.begin(), w.end());
    keys.push_back((long(w[0]) * (nu + 1) + w[1]) * (nu + 1) + w[2]);
    index.emplace(key, static_cast<int>(verts.size() - 1));
    return static_cast<int>(verts.size() - 1);
  };

  for (const auto& f : base.faces) {
    // Barycentric grid: rows i = 0..nu, each split into upward and downward
    // triangles.
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < nu - i; ++j) {
        const int a = vertex_id(f, i, j);
        const int b = vertex_id(f, i + 1, j);
        const int c = vertex_id(f, i, j + 1);
        faces.push_back({a, b, c});
        if (j < nu - i - 1) {
          const int d = vertex_id(f, i + 1, j + 1);
          faces.push_back({b, d, c});
        }
      }
  }
  if (orbit_keys) *orbit_keys = std::move(keys);
  return TriangleSurface(std::move(verts), std::move(faces));
}

TriangleSurface make_ellipsoid(double a, double b, double c, int frequency) {
  if (a <= 0 || b <= 0 || c <= 0) throw InvalidArgument("ellipsoid semi-axes must be positive");
  TriangleSurface sphere = make_icosphere(frequency, 1.0);
  std::vector<Vec3> v = sphere.vertices();
  for (auto& p : v) p = Vec3(a * p.x(), b * p.y(), c * p.z());
  return sphere.with_vertices(std::move(v));
}

TriangleSurface make_torus(double R, double r, int nu, int nv) {
  if (!(R > r && r > 0)) throw InvalidArgument("torus needs R > r > 0");
  if (nu < 3 || nv < 3) throw InvalidArgument("torus grid needs nu, nv >= 3");
  std::vector<Vec3> verts(static_cast<size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = kTwoPi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double v = kTwoPi * j / nv;
      const double w = R + r * std::cos(v);
      verts[size_t(i) * nv + j] = Vec3(w * std::cos(u), w * std::sin(u), r * std::sin(v));
    }
  }
  std::vector<std::array<int, 3>> faces;
  faces.reserve(2 * static_cast<size_t>(nu) * nv);
  auto id = [&](int i, int j) { return ((i + nu) % nu) * nv + ((j + nv) % nv); };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return TriangleSurface(std::move(verts), std::move(faces));
}

Shape generate_shape(const std::string& name, const std::map<std::string, std::string>& params) {
  const int n = param_int(params, "n", 256);
  if (name == "ellipse")
    return make_ellipse(param_num(params, "a", 2.0), param_num(params, "b", 1.0), n);
  if (name == "circle") return make_circle(param_num(params, "r", 1.0), n);
  if (name == "rectangle")
    return make_rectangle(param_num(params, "w", 4.0), param_num(params, "h", 1.0), n);
  if (name == "flower") return make_flower(n);
  if (name == "nonconvex") return make_nonconvex(n);

  const int freq = param_int(params, "frequency", 10);
  if (name == "sphere") return make_icosphere(freq, param_num(params, "r", 1.0));
  if (name == "ellipsoid")
    return make_ellipsoid(param_num(params, "a", 2.0), param_num(params, "b", 1.0),
                          param_num(params, "c", 1.0), freq);
  if (name == "torus")
    return make_torus(param_num(params, "major", 1.0), param_num(params, "minor", 0.4),
                      param_int(params, "nu", 50), param_int(params, "nv", 20));
  throw UnknownShape("unknown shape: " + name);
}

}  // namespace geoflow
