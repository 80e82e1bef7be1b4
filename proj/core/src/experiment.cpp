#include "geoflow/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace geoflow {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "geoflow 0.1.0";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Flat "section.key" -> value map from INI-style text.
std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line, section;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    kv[section.empty() ? key : section + "." + key] = val;
  }
  return kv;
}

std::string get_or(const std::map<std::string, std::string>& kv, const std::string& key,
                   const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InvalidArgument("config is missing required key: " + key);
  return it->second;
}

bool parse_bool(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

// FNV-1a over the canonical key string.
std::string content_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  const auto kv = parse_kv(text);
  ExperimentConfig c;
  c.flow = require(kv, "flow");
  c.scheme = require(kv, "scheme");
  c.tau = std::stod(require(kv, "tau"));
  c.t_end = std::stod(require(kv, "t_end"));
  c.outdir = get_or(kv, "outdir", "out");
  c.snapshot_every = std::stol(get_or(kv, "snapshot_every", "0"));
  c.snapshot_format = get_or(kv, "snapshot_format", "obj");
  c.cnlf_regularize = parse_bool(get_or(kv, "cnlf_regularize", "false"));

  c.shape_name = require(kv, "shape.name");
  for (const auto& [key, val] : kv)
    if (key.rfind("shape.", 0) == 0 && key != "shape.name")
      c.shape_params[key.substr(6)] = val;

  c.aniso_family = get_or(kv, "anisotropy.family", "kfold");
  c.beta = std::stod(get_or(kv, "anisotropy.beta", "0.05"));
  c.fold = std::stoi(get_or(kv, "anisotropy.k", "4"));
  c.eps = std::stod(get_or(kv, "anisotropy.eps", "0.01"));
  for (int l = 1;; ++l) {
    auto it = kv.find("anisotropy.g" + std::to_string(l));
    if (it == kv.end()) break;
    std::istringstream gs(it->second);
    Mat2 g;
    if (!(gs >> g(0, 0) >> g(0, 1) >> g(1, 0) >> g(1, 1)))
      throw InvalidArgument("anisotropy.g" + std::to_string(l) + " needs 4 numbers (row-major)");
    c.gmats.push_back(g);
  }
  if (kv.count("anisotropy.delta")) c.delta = std::stod(kv.at("anisotropy.delta"));

  c.ref_scheme = get_or(kv, "reference.scheme", "pc");
  c.ref_tau = std::stod(get_or(kv, "reference.tau", "0"));
  if (kv.count("reference.n")) c.ref_n = std::stoi(kv.at("reference.n"));
  c.cache_dir = get_or(kv, "reference.cache_dir", "");

  c.metric_resolution = std::stoi(get_or(kv, "metric.resolution", "256"));
  c.displacement_tol = std::stod(get_or(kv, "wulff.displacement_tol", "1e-9"));
  c.wulff_samples = std::stoi(get_or(kv, "wulff.samples", "4096"));
  return c;
}

CurveFlow ExperimentConfig::curve_flow() const {
  if (flow == "sdf") return CurveFlow::sdf();
  if (flow == "csf") return CurveFlow::csf();
  if (flow == "apcsf") return CurveFlow::apcsf();
  if (flow == "asdf") return CurveFlow::asdf(anisotropy());
  throw InvalidArgument("unknown flow: " + flow);
}

TimeScheme ExperimentConfig::time_scheme() const {
  if (scheme == "bgn") return TimeScheme::Bgn;
  if (scheme == "pc") return TimeScheme::PredictorCorrector;
  if (scheme == "cnlf") return TimeScheme::Cnlf;
  if (scheme == "bdf2") return TimeScheme::Bdf2;
  throw InvalidArgument("unknown scheme: " + scheme);
}

SurfaceScheme ExperimentConfig::surface_scheme() const {
  if (scheme == "bgn") return SurfaceScheme::Bgn;
  if (scheme == "pc") return SurfaceScheme::PredictorCorrector;
  if (scheme == "cnlf") return SurfaceScheme::Cnlf;
  if (scheme == "bdf2") return SurfaceScheme::Bdf2;
  throw InvalidArgument("unknown scheme: " + scheme);
}

AnisotropyModel ExperimentConfig::anisotropy() const {
  AnisotropyModel m = [&] {
    if (aniso_family == "isotropic") return AnisotropyModel::isotropic();
    if (aniso_family == "kfold") return AnisotropyModel::kfold(beta, fold);
    if (aniso_family == "riemannian") {
      if (gmats.empty())
        return AnisotropyModel::riemannian({Mat2{{1.0, 0.0}, {0.0, 2.0}}});
      return AnisotropyModel::riemannian(gmats);
    }
    if (aniso_family == "regularized_l1") return AnisotropyModel::regularized_l1(eps);
    throw InvalidArgument("unknown anisotropy family: " + aniso_family);
  }();
  if (delta) m = m.with_delta(*delta);
  return m;
}

bool ExperimentConfig::is_surface_run() const {
  return shape_name == "sphere" || shape_name == "ellipsoid" || shape_name == "torus";
}

Shape ExperimentConfig::make_shape() const { return generate_shape(shape_name, shape_params); }

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream os;
  os << "flow=" << flow << "\nscheme=" << scheme << "\ntau=" << format_double(tau)
     << "\nt_end=" << format_double(t_end) << "\nshape=" << shape_name << "\n";
  for (const auto& [k, v] : shape_params) os << "shape." << k << "=" << v << "\n";
  if (flow == "asdf") {
    os << "anisotropy=" << aniso_family << " beta=" << format_double(beta) << " k=" << fold
       << " eps=" << format_double(eps);
    for (const Mat2& g : gmats)
      os << " g=" << format_double(g(0, 0)) << "," << format_double(g(0, 1)) << ","
         << format_double(g(1, 0)) << "," << format_double(g(1, 1));
    if (delta) os << " delta=" << format_double(*delta);
    os << "\n";
  }
  os << "cnlf_regularize=" << (cnlf_regularize ? 1 : 0) << "\n";
  return os.str();
}

namespace {

struct DiagnosticsWriter {
  std::ofstream os;
  bool with_energy = false;
  const AnisotropyModel* model = nullptr;

  void open_2d(const std::string& path, bool energy, const AnisotropyModel* m) {
    os.open(path);
    if (!os) throw InvalidArgument("cannot open for writing: " + path);
    with_energy = energy;
    model = m;
    os << (energy ? "step,time,perimeter,area,mesh_ratio,energy\n"
                  : "step,time,perimeter,area,mesh_ratio\n");
  }
  void row_2d(const CurveState& s) {
    char buf[192];
    if (with_energy)
      std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.step_index, s.time,
                    perimeter(s.polygon), enclosed_area(s.polygon), mesh_ratio(s.polygon),
                    discrete_energy(s.polygon, *model));
    else
      std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g\n", s.step_index, s.time,
                    perimeter(s.polygon), enclosed_area(s.polygon), mesh_ratio(s.polygon));
    os << buf;
  }

  void open_3d(const std::string& path) {
    os.open(path);
    if (!os) throw InvalidArgument("cannot open for writing: " + path);
    os << "step,time,area,volume,r_h,r_a\n";
  }
  void row_3d(const SurfaceState& s) {
    const MeshQuality q = mesh_quality(s.mesh);
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.step_index, s.time,
                  surface_area(s.mesh), enclosed_volume(s.mesh), q.r_h, q.r_a);
    os << buf;
  }
};

std::string snapshot_name(const std::string& dir, long step, const std::string& ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "snap_%06ld.%s", step, ext.c_str());
  return (fs::path(dir) / buf).string();
}

void write_manifest(const std::string& path, const ExperimentConfig& config,
                    const std::string& status, double wall_seconds) {
  std::ofstream os(path);
  os << "version: " << kVersion << "\nstatus: " << status
     << "\nwall_seconds: " << format_double(wall_seconds) << "\nconfig:\n";
  std::istringstream is(config.canonical_text());
  std::string line;
  while (std::getline(is, line)) os << "  " << line << "\n";
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config) {
  fs::create_directories(config.outdir);
  RunArtifacts art;
  art.diagnostics_csv = (fs::path(config.outdir) / "diagnostics.csv").string();
  art.manifest = (fs::path(config.outdir) / "manifest.txt").string();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    Shape shape = config.make_shape();
    DiagnosticsWriter diag;
    if (std::holds_alternative<ClosedPolygon>(shape)) {
      const ClosedPolygon& initial = std::get<ClosedPolygon>(shape);
      const CurveFlow flow = config.curve_flow();
      diag.open_2d(art.diagnostics_csv, flow.anisotropic(),
                   flow.model ? &*flow.model : nullptr);
      CurveCallbacks cb;
      cb.on_state = [&](const CurveState& s) {
        diag.row_2d(s);
        if (config.snapshot_every > 0 && s.step_index % config.snapshot_every == 0) {
          const std::string p = snapshot_name(config.outdir, s.step_index, "poly");
          write_polygon_file(p, s.polygon);
          art.snapshots.push_back(p);
        }
      };
      CurveFlowOptions opts;
      opts.cnlf_regularize = config.cnlf_regularize;
      const CurveState last = run_curve_flow(initial, flow, config.time_scheme(), config.tau,
                                             config.t_end, cb, opts);
      art.final_shape = (fs::path(config.outdir) / "final.poly").string();
      write_polygon_file(art.final_shape, last.polygon);
    } else {
      const TriangleSurface& initial = std::get<TriangleSurface>(shape);
      diag.open_3d(art.diagnostics_csv);
      const std::string ext = config.snapshot_format == "vtk" ? "vtk" : "obj";
      SurfaceCallbacks cb;
      cb.on_state = [&](const SurfaceState& s) {
        diag.row_3d(s);
        if (config.snapshot_every > 0 && s.step_index % config.snapshot_every == 0) {
          const std::string p = snapshot_name(config.outdir, s.step_index, ext);
          write_mesh_file(p, s.mesh);
          art.snapshots.push_back(p);
        }
      };
      SurfaceFlowOptions opts;
      opts.cnlf_regularize = config.cnlf_regularize;
      const SurfaceState last =
          run_surface_flow(initial, config.surface_scheme(), config.tau, config.t_end, cb, opts);
      art.final_shape = (fs::path(config.outdir) / ("final." + ext)).string();
      write_mesh_file(art.final_shape, last.mesh);
    }
  } catch (const SteppingError& e) {
    write_manifest(art.manifest, config,
                   std::string("error at step ") + std::to_string(e.step) + ": " + e.what(),
                   elapsed());
    throw;
  } catch (const std::exception& e) {
    write_manifest(art.manifest, config, std::string("error: ") + e.what(), elapsed());
    throw;
  }
  write_manifest(art.manifest, config, "ok", elapsed());
  return art;
}

namespace {

// Runs one 2D flow without artifacts and returns the final state.
CurveState run_plain_2d(const ExperimentConfig& config, const std::string& scheme, double tau) {
  ExperimentConfig c = config;
  c.scheme = scheme;
  Shape shape = c.make_shape();
  return run_curve_flow(std::get<ClosedPolygon>(shape), c.curve_flow(), c.time_scheme(), tau,
                        c.t_end, {}, {});
}

}  // namespace

ErrorTable convergence_study(const ExperimentConfig& config, const std::vector<double>& taus) {
  if (taus.size() < 2) throw InvalidArgument("convergence study needs at least two tau values");
  for (size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] < taus[i - 1])) throw InvalidArgument("tau list must be strictly decreasing");
  const double tau_min = taus.back();
  double ref_tau = config.ref_tau;
  if (ref_tau == 0.0) ref_tau = tau_min / 16.0;
  if (ref_tau > tau_min / 8.0 + 1e-15)
    throw InvalidArgument("reference tau must be at most min(tau)/8");

  fs::create_directories(config.outdir);
  const std::string cache_dir =
      config.cache_dir.empty() ? (fs::path(config.outdir) / "refcache").string() : config.cache_dir;
  fs::create_directories(cache_dir);

  const bool surface = config.is_surface_run();

  // Reference key: everything that determines the reference trajectory.
  ExperimentConfig ref_cfg = config;
  ref_cfg.scheme = config.ref_scheme;
  ref_cfg.tau = ref_tau;
  if (!surface && config.ref_n) ref_cfg.shape_params["n"] = std::to_string(*config.ref_n);
  const std::string key = content_hash(ref_cfg.canonical_text());

  std::vector<std::pair<double, double>> rows;
  if (!surface) {
    const std::string ref_path = (fs::path(cache_dir) / ("ref_" + key + ".poly")).string();
    ClosedPolygon reference = [&] {
      if (fs::exists(ref_path)) return read_polygon_file(ref_path);
      Shape shape = ref_cfg.make_shape();
      const CurveState last = run_curve_flow(std::get<ClosedPolygon>(shape), ref_cfg.curve_flow(),
                                             ref_cfg.time_scheme(), ref_tau, ref_cfg.t_end, {}, {});
      const std::string tmp = ref_path + ".tmp";
      write_polygon_file(tmp, last.polygon);
      fs::rename(tmp, ref_path);  // atomic publication
      return last.polygon;
    }();
    for (double tau : taus) {
      const CurveState last = run_plain_2d(config, config.scheme, tau);
      rows.emplace_back(tau, manifold_distance_2d(last.polygon, reference));
    }
  } else {
    const std::string ref_path = (fs::path(cache_dir) / ("ref_" + key + ".obj")).string();
    TriangleSurface reference = [&] {
      if (fs::exists(ref_path)) return read_mesh_file(ref_path);
      Shape shape = ref_cfg.make_shape();
      const SurfaceState last =
          run_surface_flow(std::get<TriangleSurface>(shape), ref_cfg.surface_scheme(), ref_tau,
                           ref_cfg.t_end, {}, {});
      const std::string tmp = ref_path + ".tmp";
      write_mesh_file(tmp, last.mesh);
      fs::rename(tmp, ref_path);
      return last.mesh;
    }();
    for (double tau : taus) {
      Shape shape = config.make_shape();
      SurfaceFlowOptions opts;
      opts.cnlf_regularize = config.cnlf_regularize;
      const SurfaceState last = run_surface_flow(
          std::get<TriangleSurface>(shape), config.surface_scheme(), tau, config.t_end, {}, opts);
      rows.emplace_back(tau,
                        manifold_distance_3d(last.mesh, reference, config.metric_resolution).value);
    }
  }
  const ErrorTable table = convergence_table(rows);
  write_error_table_file((fs::path(config.outdir) / "convergence.csv").string(), table);
  return table;
}

namespace {

// Evolves until the per-step max vertex displacement drops below
// tol * diameter; throws NotConverged at t_end.
CurveState run_to_equilibrium(const ClosedPolygon& initial, const CurveFlow& flow,
                              TimeScheme scheme, double tau, double t_cap, double tol) {
  CurveState curr{initial, initial_scalar(initial, flow), 0.0, 0};
  const double threshold = tol * initial.diameter();
  const long max_steps = std::llround(t_cap / tau);
  for (long m = 0; m < max_steps; ++m) {
    CurveState next = scheme == TimeScheme::Bgn ? bgn_step(curr, tau, flow)
                                                : pc_step(curr, tau, flow);
    double disp = 0.0;
    for (int i = 0; i < next.polygon.size(); ++i)
      disp = std::max(disp, (next.polygon.vertex(i) - curr.polygon.vertex(i)).norm());
    curr = std::move(next);
    if (disp < threshold) return curr;
  }
  throw NotConverged("no equilibrium before t_end (threshold " + format_double(threshold) + ")");
}

}  // namespace

WulffComparison wulff_compare(const ExperimentConfig& config) {
  if (config.flow != "asdf")
    throw InvalidArgument("wulff_compare needs an anisotropic surface diffusion config");
  const AnisotropyModel model = config.anisotropy();
  Shape shape = config.make_shape();
  const ClosedPolygon& initial = std::get<ClosedPolygon>(shape);
  const CurveFlow flow = CurveFlow::asdf(model);

  WulffComparison out;
  out.initial_area = enclosed_area(initial);

  const CurveState eq_bjl = run_to_equilibrium(initial, flow, TimeScheme::Bgn, config.tau,
                                               config.t_end, config.displacement_tol);
  const CurveState eq_pc = run_to_equilibrium(initial, flow, TimeScheme::PredictorCorrector,
                                              config.tau, config.t_end, config.displacement_tol);
  out.stop_time_first_order = eq_bjl.time;
  out.stop_time_pc = eq_pc.time;

  const WulffShape wulff = wulff_shape(model, config.wulff_samples);
  out.wulff_trimmed = wulff.trimmed;

  // The flow preserves the enclosed area, so the theoretical equilibrium is
  // the Wulff shape scaled to the initial area, centered on each equilibrium.
  const double s = std::sqrt(out.initial_area / enclosed_area(wulff.boundary));
  const Vec2 wc = area_centroid(wulff.boundary);
  auto compare = [&](const CurveState& eq) {
    const Vec2 c = area_centroid(eq.polygon);
    std::vector<Vec2> v = wulff.boundary.vertices();
    for (Vec2& p : v) p = c + s * (p - wc);
    return manifold_distance_2d(eq.polygon, ClosedPolygon(std::move(v)));
  };
  out.distance_first_order = compare(eq_bjl);
  out.distance_pc = compare(eq_pc);
  return out;
}

}  // namespace geoflow
