#pragma once

// Closed oriented triangle meshes: per-face geometry, surface gradients of
// piecewise-linear functions, mass-lumped inner products, mean-curvature
// initialization, volume/area/mesh-quality diagnostics, and OFF/OBJ/VTK IO.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geoflow/errors.hpp"

namespace geoflow {

using Vec3 = Eigen::Vector3d;

// Watertight, consistently oriented triangle mesh. The constructor checks
// that every directed edge is matched by exactly one reverse edge and flips
// all faces if the signed volume is negative, so face normals point outward.
class TriangleSurface {
 public:
  TriangleSurface(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

  int vertex_count() const { return static_cast<int>(verts_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }
  const std::vector<Vec3>& vertices() const { return verts_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const Vec3& vertex(int i) const { return verts_[i]; }

  // Same connectivity, new vertex positions (revalidates orientation only
  // via face areas; throws DegenerateFace).
  TriangleSurface with_vertices(std::vector<Vec3> vertices) const;

  double diameter() const;

 private:
  TriangleSurface() = default;
  std::vector<Vec3> verts_;
  std::vector<std::array<int, 3>> faces_;
};

struct SurfaceState {
  TriangleSurface mesh;
  std::vector<double> mean_curvature;  // nodal H, sum-of-principal-curvatures
  double time = 0.0;
  long step_index = 0;
};

struct SurfaceFaces {
  std::vector<double> area;
  std::vector<Vec3> normal;  // unit outward
};

// Throws DegenerateFace on a zero-area triangle.
SurfaceFaces face_data(const TriangleSurface& mesh);

// Vertex-lumped inner product (1/3) sum_j |sigma_j| sum_k (uv)(q_{jk}).
double lumped_inner_product_3d(const TriangleSurface& mesh, const std::vector<double>& u,
                               const std::vector<double>& v);
// Lumped vertex masses m_i = (1/3) sum of adjacent face areas.
std::vector<double> lumped_masses_3d(const TriangleSurface& mesh);
// Weighted vertex normals omega_i = (1/3) sum of |sigma_j| n_j over adjacent
// faces, so (v.n^h, phi_i)^h = v_i . omega_i for nodal vector fields v.
std::vector<Vec3> weighted_normals_3d(const TriangleSurface& mesh);

// In-plane gradient of the linear function with the given corner values on
// the triangle (a,b,c).
Vec3 face_gradient(const Vec3& a, const Vec3& b, const Vec3& c, double ua, double ub, double uc);

// sum_j |sigma_j| (grad u . grad v) over faces.
double surface_gradient_pairing(const TriangleSurface& mesh, const std::vector<double>& u,
                                const std::vector<double>& v);
double surface_gradient_pairing(const TriangleSurface& mesh, const std::vector<Vec3>& u,
                                const std::vector<Vec3>& v);

// Least-squares mean curvature from the weak form H n = -Delta_Gamma Id:
// H_i = omega_i . (K2 X)_i / |omega_i|^2 (unit sphere gives H = +2).
std::vector<double> init_mean_curvature(const TriangleSurface& mesh);

double surface_area(const TriangleSurface& mesh);
// Divergence-theorem volume; positive for outward orientation.
double enclosed_volume(const TriangleSurface& mesh);

struct MeshQuality {
  double r_h = 1.0;  // longest edge over shortest edge
  double r_a = 1.0;  // largest face area over smallest
};
MeshQuality mesh_quality(const TriangleSurface& mesh);

// ASCII mesh IO. Format chosen by extension: .off or .obj.
void write_off(std::ostream& os, const TriangleSurface& mesh);
void write_obj(std::ostream& os, const TriangleSurface& mesh);
void write_mesh_file(const std::string& path, const TriangleSurface& mesh);
TriangleSurface read_off(std::istream& is);
TriangleSurface read_obj(std::istream& is);
TriangleSurface read_mesh_file(const std::string& path);
// Legacy-VTK POLYDATA snapshot (one file per time level).
void write_vtk(std::ostream& os, const TriangleSurface& mesh);

}  // namespace geoflow
