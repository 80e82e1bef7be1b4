// geoflow: experiment runner for geometric evolution of closed curves and
// surfaces.
//
//   geoflow run      --config exp.cfg                  single experiment
//   geoflow converge --config exp.cfg --taus ...       tau-sweep study
//   geoflow wulff    --config exp.cfg                  equilibrium vs Wulff
//   geoflow distance a.poly b.poly [--resolution R]    shape metric
//   geoflow shapes   --name ellipse --out e.poly ...   emit an initial shape

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "geoflow/experiment.hpp"

using namespace geoflow;

namespace {

bool is_mesh_path(const std::string& p) {
  return p.size() >= 4 &&
         (p.substr(p.size() - 4) == ".obj" || p.substr(p.size() - 4) == ".off");
}

int run_cmd(const std::string& config_path, const std::string& outdir) {
  ExperimentConfig c = ExperimentConfig::from_file(config_path);
  if (!outdir.empty()) c.outdir = outdir;
  const RunArtifacts art = run_experiment(c);
  std::printf("diagnostics: %s\nfinal: %s\nmanifest: %s\n", art.diagnostics_csv.c_str(),
              art.final_shape.c_str(), art.manifest.c_str());
  return 0;
}

int converge_cmd(const std::string& config_path, std::vector<double> taus,
                 const std::string& outdir) {
  ExperimentConfig c = ExperimentConfig::from_file(config_path);
  if (!outdir.empty()) c.outdir = outdir;
  if (taus.empty()) {
    // Default ladder: five halvings starting from the config tau.
    double t = c.tau;
    for (int i = 0; i < 5; ++i, t /= 2.0) taus.push_back(t);
  }
  const ErrorTable table = convergence_study(c, taus);
  write_error_table(std::cout, table);
  std::printf("fitted order: %.4f\n", fitted_order(table));
  return 0;
}

int wulff_cmd(const std::string& config_path) {
  const ExperimentConfig c = ExperimentConfig::from_file(config_path);
  const WulffComparison w = wulff_compare(c);
  std::printf("wulff_trimmed: %d\n", int(w.wulff_trimmed));
  std::printf("distance_first_order: %.12g (stopped at t=%.6g)\n", w.distance_first_order,
              w.stop_time_first_order);
  std::printf("distance_pc: %.12g (stopped at t=%.6g)\n", w.distance_pc, w.stop_time_pc);
  return 0;
}

int distance_cmd(const std::string& a, const std::string& b, int resolution) {
  if (is_mesh_path(a) != is_mesh_path(b))
    throw InvalidArgument("cannot mix a curve file with a mesh file");
  if (is_mesh_path(a)) {
    const SampledVolume v =
        manifold_distance_3d(read_mesh_file(a), read_mesh_file(b), resolution);
    std::printf("%.12g (refinement delta %.3g)\n", v.value, v.refinement_delta);
  } else {
    std::printf("%.12g\n", manifold_distance_2d(read_polygon_file(a), read_polygon_file(b)));
  }
  return 0;
}

int shapes_cmd(const std::string& name, const std::vector<std::string>& params,
               const std::string& out) {
  std::map<std::string, std::string> kv;
  for (const std::string& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw InvalidArgument("shape parameter must be key=value: " + p);
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  const Shape shape = generate_shape(name, kv);
  if (std::holds_alternative<ClosedPolygon>(shape))
    write_polygon_file(out, std::get<ClosedPolygon>(shape));
  else
    write_mesh_file(out, std::get<TriangleSurface>(shape));
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric finite element flows for closed curves and surfaces"};
  app.require_subcommand(1);

  std::string config_path, outdir;
  auto* run = app.add_subcommand("run", "run a single experiment");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--outdir", outdir, "override the output directory");

  std::string cv_config, cv_outdir;
  std::vector<double> taus;
  auto* conv = app.add_subcommand("converge", "tau-sweep convergence study");
  conv->add_option("--config", cv_config, "experiment config file")->required();
  conv->add_option("--taus", taus, "strictly decreasing tau list");
  conv->add_option("--outdir", cv_outdir, "override the output directory");

  std::string wl_config;
  auto* wl = app.add_subcommand("wulff", "compare equilibria with the Wulff shape");
  wl->add_option("--config", wl_config, "experiment config file")->required();

  std::string da, db;
  int resolution = 256;
  auto* dist = app.add_subcommand("distance", "manifold distance of two shape files");
  dist->add_option("a", da, "first shape file (.poly/.txt or .obj/.off)")->required();
  dist->add_option("b", db, "second shape file")->required();
  dist->add_option("--resolution", resolution, "3D sampling resolution (default 256)");

  std::string shape_name, shape_out = "shape.poly";
  std::vector<std::string> shape_params;
  auto* sh = app.add_subcommand("shapes", "emit a named initial shape");
  sh->add_option("--name", shape_name, "ellipse|circle|rectangle|flower|nonconvex|sphere|ellipsoid|torus")
      ->required();
  sh->add_option("--param", shape_params, "shape parameter key=value (repeatable)");
  sh->add_option("--out", shape_out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_cmd(config_path, outdir);
    if (*conv) return converge_cmd(cv_config, taus, cv_outdir);
    if (*wl) return wulff_cmd(wl_config);
    if (*dist) return distance_cmd(da, db, resolution);
    if (*sh) return shapes_cmd(shape_name, shape_params, shape_out);
  } catch (const SteppingError& e) {
    std::fprintf(stderr, "error: SteppingError: step %ld: %s\n", e.step, e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
