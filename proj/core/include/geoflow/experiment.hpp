#pragma once

// Experiment harness: config parsing, single runs with diagnostics CSVs and
// snapshots, tau-sweep convergence studies against a cached reference
// solution, and equilibrium comparison against the Wulff shape.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/anisotropy.hpp"
#include "geoflow/curve_flow.hpp"
#include "geoflow/metrics.hpp"
#include "geoflow/shapes.hpp"
#include "geoflow/surface_flow.hpp"

namespace geoflow {

// Parsed from a key/value file with [section] headers and '#' comments.
// Required keys: flow, scheme, shape.name, tau, t_end; everything else has a
// default.
struct ExperimentConfig {
  std::string flow;    // sdf | csf | apcsf | asdf
  std::string scheme;  // bgn | pc | cnlf | bdf2
  double tau = 0.0;
  double t_end = 0.0;
  std::string outdir = "out";
  long snapshot_every = 0;  // 0: final state only
  std::string snapshot_format = "obj";  // obj | vtk (3D runs)
  bool cnlf_regularize = false;

  std::string shape_name;
  std::map<std::string, std::string> shape_params;

  // [anisotropy]
  std::string aniso_family = "kfold";
  double beta = 0.05;
  int fold = 4;
  double eps = 0.01;
  std::vector<Mat2> gmats;
  std::optional<double> delta;

  // [reference]
  std::string ref_scheme = "pc";
  double ref_tau = 0.0;          // 0: tau_min/16 in convergence studies
  std::optional<int> ref_n;      // 2D reference vertex count; default 2000
  std::string cache_dir;         // default: <outdir>/refcache

  // [metric]
  int metric_resolution = 256;

  // [wulff]
  double displacement_tol = 1e-9;  // per-step threshold, relative to diameter
  int wulff_samples = 4096;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);

  CurveFlow curve_flow() const;
  TimeScheme time_scheme() const;
  SurfaceScheme surface_scheme() const;
  AnisotropyModel anisotropy() const;
  bool is_surface_run() const;
  Shape make_shape() const;
  std::string canonical_text() const;  // config echo, deterministic order
};

struct RunArtifacts {
  std::string diagnostics_csv;
  std::string final_shape;
  std::string manifest;
  std::vector<std::string> snapshots;
};

// Runs one experiment, writing the trajectory snapshots, the per-step
// diagnostics CSV, the final shape file and a manifest. Solver failures are
// recorded in the manifest (with the failing step) and rethrown.
RunArtifacts run_experiment(const ExperimentConfig& config);

// Computes (or loads from the cache) the reference solution, runs every tau
// in the strictly decreasing list, measures the manifold distance at t_end
// and writes <outdir>/convergence.csv. ref_tau must be <= min(tau)/8.
ErrorTable convergence_study(const ExperimentConfig& config, const std::vector<double>& taus);

struct WulffComparison {
  double distance_first_order = 0.0;  // BJL equilibrium vs Wulff polygon
  double distance_pc = 0.0;           // BJL/PC equilibrium vs Wulff polygon
  double initial_area = 0.0;
  double stop_time_first_order = 0.0;
  double stop_time_pc = 0.0;
  bool wulff_trimmed = false;
};

// Evolves the configured shape with both the first-order scheme and the
// predictor-corrector until the per-step displacement falls below the
// threshold (NotConverged if t_end arrives first), then measures the
// manifold distance of each equilibrium to the Wulff polygon rescaled to
// the initial enclosed area and aligned at the centroid.
WulffComparison wulff_compare(const ExperimentConfig& config);

}  // namespace geoflow
