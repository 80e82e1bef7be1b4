#include "geoflow/surface.hpp"

#include <algorithm>

#include <Eigen/Geometry>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace geoflow {

namespace {

double signed_volume(const std::vector<Vec3>& v, const std::vector<std::array<int, 3>>& f) {
  double vol = 0.0;
  for (const auto& t : f) vol += v[t[0]].dot(v[t[1]].cross(v[t[2]]));
  return vol / 6.0;
}

void check_field_3d(const TriangleSurface& mesh, size_t len) {
  if (len != static_cast<size_t>(mesh.vertex_count()))
    throw DimensionMismatch("nodal field length " + std::to_string(len) +
                            " does not match vertex count " + std::to_string(mesh.vertex_count()));
}

}  // namespace

TriangleSurface::TriangleSurface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces)
    : verts_(std::move(vertices)), faces_(std::move(faces)) {
  const int nv = static_cast<int>(verts_.size());
  if (nv < 4 || faces_.size() < 4) throw InvalidArgument("mesh too small to be closed");
  for (const auto& v : verts_)
    if (!v.allFinite()) throw InvalidArgument("mesh vertex is not finite");
  for (const auto& f : faces_) {
    for (int k : f)
      if (k < 0 || k >= nv) throw InvalidArgument("face index out of range");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw InvalidArgument("face repeats a vertex");
  }
  // Watertight and consistently oriented: every directed edge appears exactly
  // once, and its reverse exactly once.
  std::map<std::pair<int, int>, int> count;
  for (const auto& f : faces_)
    for (int k = 0; k < 3; ++k) {
      const auto key = std::make_pair(f[k], f[(k + 1) % 3]);
      if (++count[key] > 1) throw InvalidArgument("directed edge repeated; mesh not orientable");
    }
  for (const auto& [key, c] : count) {
    (void)c;
    if (!count.count(std::make_pair(key.second, key.first)))
      throw InvalidArgument("boundary edge found; mesh not watertight");
  }
  if (signed_volume(verts_, faces_) < 0.0)
    for (auto& f : faces_) std::swap(f[1], f[2]);
}

TriangleSurface TriangleSurface::with_vertices(std::vector<Vec3> vertices) const {
  if (vertices.size() != verts_.size())
    throw DimensionMismatch("vertex count mismatch in with_vertices");
  TriangleSurface out;
  out.verts_ = std::move(vertices);
  out.faces_ = faces_;
  return out;
}

double TriangleSurface::diameter() const {
  Vec3 lo = verts_[0], hi = verts_[0];
  for (const auto& v : verts_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

SurfaceFaces face_data(const TriangleSurface& mesh) {
  SurfaceFaces fd;
  const int nf = mesh.face_count();
  fd.area.resize(nf);
  fd.normal.resize(nf);
  for (int j = 0; j < nf; ++j) {
    const auto& f = mesh.faces()[j];
    const Vec3 c = (mesh.vertex(f[1]) - mesh.vertex(f[0])).cross(mesh.vertex(f[2]) - mesh.vertex(f[0]));
    const double n2 = c.norm();
    if (n2 == 0.0) throw DegenerateFace("zero-area face at index " + std::to_string(j));
    fd.area[j] = 0.5 * n2;
    fd.normal[j] = c / n2;
  }
  return fd;
}

std::vector<double> lumped_masses_3d(const TriangleSurface& mesh) {
  const SurfaceFaces fd = face_data(mesh);
  std::vector<double> m(mesh.vertex_count(), 0.0);
  for (int j = 0; j < mesh.face_count(); ++j)
    for (int k : mesh.faces()[j]) m[k] += fd.area[j] / 3.0;
  return m;
}

std::vector<Vec3> weighted_normals_3d(const TriangleSurface& mesh) {
  const SurfaceFaces fd = face_data(mesh);
  std::vector<Vec3> w(mesh.vertex_count(), Vec3::Zero());
  for (int j = 0; j < mesh.face_count(); ++j)
    for (int k : mesh.faces()[j]) w[k] += fd.area[j] / 3.0 * fd.normal[j];
  return w;
}

double lumped_inner_product_3d(const TriangleSurface& mesh, const std::vector<double>& u,
                               const std::vector<double>& v) {
  check_field_3d(mesh, u.size());
  check_field_3d(mesh, v.size());
  const std::vector<double> m = lumped_masses_3d(mesh);
  double s = 0.0;
  for (int i = 0; i < mesh.vertex_count(); ++i) s += m[i] * u[i] * v[i];
  return s;
}

Vec3 face_gradient(const Vec3& a, const Vec3& b, const Vec3& c, double ua, double ub, double uc) {
  const Vec3 cr = (b - a).cross(c - a);
  const double two_area = cr.norm();
  if (two_area == 0.0) throw DegenerateFace();
  const Vec3 n = cr / two_area;
  // Barycentric basis gradients: grad lambda_a = n x (c - b) / 2A, cyclic.
  const Vec3 ga = n.cross(c - b) / two_area;
  const Vec3 gb = n.cross(a - c) / two_area;
  const Vec3 gc = n.cross(b - a) / two_area;
  return ua * ga + ub * gb + uc * gc;
}

double surface_gradient_pairing(const TriangleSurface& mesh, const std::vector<double>& u,
                                const std::vector<double>& v) {
  check_field_3d(mesh, u.size());
  check_field_3d(mesh, v.size());
  const SurfaceFaces fd = face_data(mesh);
  double s = 0.0;
  for (int j = 0; j < mesh.face_count(); ++j) {
    const auto& f = mesh.faces()[j];
    const Vec3 gu = face_gradient(mesh.vertex(f[0]), mesh.vertex(f[1]), mesh.vertex(f[2]),
                                  u[f[0]], u[f[1]], u[f[2]]);
    const Vec3 gv = face_gradient(mesh.vertex(f[0]), mesh.vertex(f[1]), mesh.vertex(f[2]),
                                  v[f[0]], v[f[1]], v[f[2]]);
    s += fd.area[j] * gu.dot(gv);
  }
  return s;
}

double surface_gradient_pairing(const TriangleSurface& mesh, const std::vector<Vec3>& u,
                                const std::vector<Vec3>& v) {
  check_field_3d(mesh, u.size());
  check_field_3d(mesh, v.size());
  double s = 0.0;
  std::vector<double> uc(mesh.vertex_count()), vc(mesh.vertex_count());
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < mesh.vertex_count(); ++i) {
      uc[i] = u[i][k];
      vc[i] = v[i][k];
    }
    s += surface_gradient_pairing(mesh, uc, vc);
  }
  return s;
}

std::vector<double> init_mean_curvature(const TriangleSurface& mesh) {
  const std::vector<Vec3> omega = weighted_normals_3d(mesh);
  const int nv = mesh.vertex_count();
  // b_i = (K2 X)_i, the surface stiffness applied to the positions.
  std::vector<Vec3> b(nv, Vec3::Zero());
  for (int j = 0; j < mesh.face_count(); ++j) {
    const auto& f = mesh.faces()[j];
    const Vec3& pa = mesh.vertex(f[0]);
    const Vec3& pb = mesh.vertex(f[1]);
    const Vec3& pc = mesh.vertex(f[2]);
    const Vec3 cr = (pb - pa).cross(pc - pa);
    const double two_area = cr.norm();
    const Vec3 n = cr / two_area;
    const Vec3 g[3] = {n.cross(pc - pb) / two_area, n.cross(pa - pc) / two_area,
                       n.cross(pb - pa) / two_area};
    const double area = 0.5 * two_area;
    for (int r = 0; r < 3; ++r) {
      Vec3 acc = Vec3::Zero();
      for (int c = 0; c < 3; ++c) acc += area * g[r].dot(g[c]) * mesh.vertex(f[c]);
      b[f[r]] += acc;
    }
  }
  std::vector<double> h(nv);
  for (int i = 0; i < nv; ++i) {
    const double w2 = omega[i].squaredNorm();
    if (w2 == 0.0)
      throw SingularNormalEquations("vanishing weighted vertex normal at vertex " +
                                    std::to_string(i));
    h[i] = omega[i].dot(b[i]) / w2;
  }
  return h;
}

double surface_area(const TriangleSurface& mesh) {
  const SurfaceFaces fd = face_data(mesh);
  double s = 0.0;
  for (double a : fd.area) s += a;
  return s;
}

double enclosed_volume(const TriangleSurface& mesh) {
  const SurfaceFaces fd = face_data(mesh);
  double v = 0.0;
  for (int j = 0; j < mesh.face_count(); ++j) {
    const auto& f = mesh.faces()[j];
    const Vec3 centroid = (mesh.vertex(f[0]) + mesh.vertex(f[1]) + mesh.vertex(f[2])) / 3.0;
    v += fd.area[j] * centroid.dot(fd.normal[j]) / 3.0;
  }
  return v;
}

MeshQuality mesh_quality(const TriangleSurface& mesh) {
  const SurfaceFaces fd = face_data(mesh);
  double emax = 0.0, emin = std::numeric_limits<double>::infinity();
  for (const auto& f : mesh.faces())
    for (int k = 0; k < 3; ++k) {
      const double e = (mesh.vertex(f[k]) - mesh.vertex(f[(k + 1) % 3])).norm();
      emax = std::max(emax, e);
      emin = std::min(emin, e);
    }
  const auto [alo, ahi] = std::minmax_element(fd.area.begin(), fd.area.end());
  return MeshQuality{emax / emin, *ahi / *alo};
}

void write_off(std::ostream& os, const TriangleSurface& mesh) {
  os << "OFF\n" << mesh.vertex_count() << " " << mesh.face_count() << " 0\n";
  char buf[128];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  for (const auto& f : mesh.faces()) os << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

void write_obj(std::ostream& os, const TriangleSurface& mesh) {
  char buf[128];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  for (const auto& f : mesh.faces())
    os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
}

void write_vtk(std::ostream& os, const TriangleSurface& mesh) {
  os << "# vtk DataFile Version 3.0\nsurface snapshot\nASCII\nDATASET POLYDATA\n";
  os << "POINTS " << mesh.vertex_count() << " double\n";
  char buf[128];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  os << "POLYGONS " << mesh.face_count() << " " << 4 * mesh.face_count() << "\n";
  for (const auto& f : mesh.faces()) os << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
}

TriangleSurface read_off(std::istream& is) {
  std::string header;
  is >> header;
  if (header != "OFF") throw InvalidArgument("not an OFF file");
  int nv = 0, nf = 0, ne = 0;
  if (!(is >> nv >> nf >> ne)) throw InvalidArgument("OFF: bad counts");
  std::vector<Vec3> verts(nv);
  for (auto& v : verts)
    if (!(is >> v.x() >> v.y() >> v.z())) throw InvalidArgument("OFF: truncated vertices");
  std::vector<std::array<int, 3>> faces(nf);
  for (auto& f : faces) {
    int k = 0;
    if (!(is >> k) || k != 3) throw InvalidArgument("OFF: only triangles are supported");
    if (!(is >> f[0] >> f[1] >> f[2])) throw InvalidArgument("OFF: truncated faces");
  }
  return TriangleSurface(std::move(verts), std::move(faces));
}

TriangleSurface read_obj(std::istream& is) {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z())) throw InvalidArgument("OBJ: bad vertex line");
      verts.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      std::string tok;
      for (int k = 0; k < 3; ++k) {
        if (!(ls >> tok)) throw InvalidArgument("OBJ: only triangles are supported");
        f[k] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      std::string extra;
      if (ls >> extra) throw InvalidArgument("OBJ: only triangles are supported");
      faces.push_back(f);
    }
  }
  return TriangleSurface(std::move(verts), std::move(faces));
}

void write_mesh_file(const std::string& path, const TriangleSurface& mesh) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open for writing: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".off")
    write_off(os, mesh);
  else if (path.size() >= 4 && path.substr(path.size() - 4) == ".vtk")
    write_vtk(os, mesh);
  else
    write_obj(os, mesh);
}

TriangleSurface read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".off") return read_off(is);
  return read_obj(is);
}

}  // namespace geoflow
