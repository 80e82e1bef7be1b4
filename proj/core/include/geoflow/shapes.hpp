#pragma once

// Initial-shape generators for experiments and tests. Curves are sampled at
// uniform parameter values and stored clockwise; surfaces come from a
// geodesic icosahedral sphere (frequency nu gives J = 20 nu^2 faces,
// K = 10 nu^2 + 2 vertices) or a structured torus grid.

#include <map>
#include <string>
#include <variant>

#include "geoflow/curve.hpp"
#include "geoflow/surface.hpp"

namespace geoflow {

ClosedPolygon make_ellipse(double a, double b, int n);
ClosedPolygon make_circle(double r, int n);
// Axis-aligned w x h rectangle boundary sampled at n uniform arc-length points.
ClosedPolygon make_rectangle(double w, double h, int n);
// Polar r(theta) = 1 + 0.4 cos(6 theta).
ClosedPolygon make_flower(int n);
// Polar r(theta) = 1 + 0.65 cos(3 theta).
ClosedPolygon make_nonconvex(int n);

// Geodesic sphere of class I with the given frequency; vertices on the
// sphere of radius r. Optionally reports a per-vertex orbit key that is
// invariant under the icosahedral symmetry group.
TriangleSurface make_icosphere(int frequency, double r = 1.0,
                               std::vector<long>* orbit_keys = nullptr);
// Icosphere scaled by the semi-axes (a, b, c).
TriangleSurface make_ellipsoid(double a, double b, double c, int frequency);
// Structured torus grid: K = nu*nv vertices, J = 2*nu*nv faces; major radius
// R, minor radius r.
TriangleSurface make_torus(double R, double r, int nu, int nv);

using Shape = std::variant<ClosedPolygon, TriangleSurface>;

// Factory keyed by name, with parameters as key/value strings (missing keys
// take the documented defaults). Known names: ellipse, circle, rectangle,
// flower, nonconvex, sphere, ellipsoid, torus. Throws UnknownShape.
Shape generate_shape(const std::string& name, const std::map<std::string, std::string>& params);

}  // namespace geoflow
