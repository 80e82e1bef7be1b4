#pragma once

// Shape metrics and convergence-order tables. The 2D manifold distance
// M(G1,G2) = |O1| + |O2| - 2 |O1 n O2| is exact up to the coordinate
// snapping (about 1e-11 of the geometry scale); the 3D distance samples a
// uniform grid of lines and is exact along the line direction.

#include <iosfwd>
#include <string>
#include <vector>

#include "geoflow/curve.hpp"
#include "geoflow/surface.hpp"

namespace geoflow {

// Exact symmetric-difference area of the enclosed regions; symmetric,
// nonnegative, zero for identical loops. Both polygons must be simple
// (NonSimplePolygon otherwise).
double manifold_distance_2d(const ClosedPolygon& g1, const ClosedPolygon& g2);

struct SampledVolume {
  double value = 0.0;             // |O1 sym O2| estimate
  double refinement_delta = 0.0;  // |estimate - estimate at half resolution|
};

// Symmetric-difference volume by ray-parity classification over a uniform
// (resolution x resolution) grid of axis-parallel lines covering the joint
// bounding box; the measure along each line is exact. resolution >= 64.
// Throws ClassificationFailure if the parity stays inconsistent under
// in-cell jitter (near-degenerate geometry).
SampledVolume manifold_distance_3d(const TriangleSurface& g1, const TriangleSurface& g2,
                                   int resolution);

struct ErrorRow {
  double tau = 0.0;
  double error = 0.0;
  double order = 0.0;  // NaN in the first row
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
};

// Pairwise convergence orders log(E1/E2)/log(tau1/tau2); tau strictly
// decreasing, errors positive (NonPositiveError).
ErrorTable convergence_table(const std::vector<std::pair<double, double>>& tau_error);

// CSV with columns tau,error,order (order empty in the first row).
void write_error_table(std::ostream& os, const ErrorTable& table);
void write_error_table_file(const std::string& path, const ErrorTable& table);

// Least-squares slope of log(error) against log(tau).
double fitted_order(const ErrorTable& table);

}  // namespace geoflow
