#include "oblab/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace oblab {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

struct RunContext {
  RunConfig cfg;
  Grid grid;
  ObstacleProblemSpec spec;
  SolveResult result;
  FreeBoundaryGeometry geom;
  bool synthetic = false;
};

RunContext build_and_solve(const RunConfig& cfg) {
  RunContext ctx;
  ctx.cfg = cfg;
  ctx.grid = build_grid(cfg.grid.dim, cfg.grid.half_width,
                        cfg.grid.nodes_per_axis);
  ctx.spec.grid = ctx.grid;
  ctx.spec.coeff = make_coefficients(ctx.grid, cfg.coeff, cfg.rhs);
  ctx.spec.boundary = boundary_field(ctx.grid, cfg.boundary);
  ctx.spec.tol = cfg.solver.tol;
  ctx.spec.max_iter = cfg.solver.max_iter;

  if (cfg.synthetic.enabled) {
    ctx.synthetic = true;
    ctx.result.w = synthetic_field(ctx.grid, cfg.synthetic.family);
    ctx.result.method = "synthetic(" + cfg.synthetic.family + ")";
    ctx.result.converged = true;
    ctx.result.residual = 0.0;
    ctx.result.scale = 1.0;
  } else {
    ctx.result = solve_obstacle(ctx.spec, cfg.solver.method);
  }
  // synthetic fields carry no solver noise: keep the positive threshold at
  // zero so flat profiles (quartic) are not absorbed into the contact set
  ctx.geom = extract_geometry(ctx.result.w, ctx.synthetic ? 0.0 : -1.0);
  return ctx;
}

// Input fingerprint: the canonical config without the output directory, so
// the same run written elsewhere produces byte-identical artifacts.
json config_fingerprint(const RunConfig& cfg) {
  json j = serialize_config(cfg);
  j.erase("output");
  return j;
}

json solve_summary(const RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  json j;
  j["config"] = config_fingerprint(cfg);
  j["method"] = ctx.result.method;
  j["converged"] = ctx.result.converged;
  j["iterations"] = ctx.result.iterations;
  j["residual"] = ctx.result.residual;
  j["scale"] = ctx.result.scale;
  j["energy"] = ctx.result.energy;
  j["active_count"] = ctx.result.active_nodes.size();
  j["positive_count"] = ctx.result.positive_nodes.size();
  j["fb_count"] = ctx.geom.fb_nodes.size();
  j["tau_pos"] = ctx.geom.tau_pos;
  j["coefficients"] = {{"family", ctx.spec.coeff.family_name},
                       {"lambda", ctx.spec.coeff.lambda},
                       {"Lambda", ctx.spec.coeff.Lambda},
                       {"f_min", ctx.spec.coeff.lambda_star},
                       {"f_max", ctx.spec.coeff.Lambda_star}};
  if (!ctx.synthetic && ctx.result.converged) {
    const EquivalenceReport eq =
        equivalence_check(ctx.spec, ctx.result, cfg.seed);
    j["minimizer_check"] = {{"weak_defect", eq.weak_defect},
                            {"worst_margin", eq.worst_margin},
                            {"competitors", eq.competitor_count}};
  }
  if (cfg.reference.enabled) {
    const ScalarField exact = reference_field(ctx.grid, cfg.reference);
    j["error_nodal"] = nodal_error(ctx.result.w, exact);
    j["error_lattice"] =
        lattice_error(ctx.result.w, reference_function(ctx.grid, cfg.reference));
  }
  return j;
}

std::string fb_csv(const RunContext& ctx) {
  std::ostringstream out;
  const int dim = ctx.grid.dim;
  for (int d = 0; d < dim; ++d) out << "x" << (d + 1) << (d + 1 < dim ? "," : "\n");
  char buf[64];
  for (std::size_t i : ctx.geom.fb_nodes) {
    const Point p = ctx.grid.coords(i);
    for (int d = 0; d < dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[d]);
      out << buf << (d + 1 < dim ? "," : "\n");
    }
  }
  return out.str();
}

/// Writes the solve artifacts common to every command into dir.
std::vector<std::string> write_solve_artifacts(const RunContext& ctx,
                                               const fs::path& dir) {
  std::vector<std::string> files;
  write_field(ctx.result.w, (dir / "solution.field").string());
  files.push_back("solution.field");
  write_json_file(dir / "summary.json", solve_summary(ctx));
  files.push_back("summary.json");
  write_text(dir / "fb.csv", fb_csv(ctx));
  files.push_back("fb.csv");
  return files;
}

void write_meta_and_manifest(const fs::path& dir, const std::string& command,
                             const RunConfig& cfg,
                             std::vector<std::string> files,
                             const std::string& started, double wall) {
  write_json_file(dir / "run_meta.json", json{{"command", command},
                                              {"started_at", started},
                                              {"finished_at", iso_now()},
                                              {"wall_seconds", wall}});
  files.push_back("run_meta.json");
  write_json_file(dir / "manifest.json",
                  json{{"command", command},
                       {"config", config_fingerprint(cfg)},
                       {"artifacts", files}});
}

std::size_t point_node(const Grid& g, const Point& x) {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = 0; d < g.dim; ++d) {
    const double u = (x[d] + g.half_width) / g.spacing;
    const int i = static_cast<int>(std::lround(u));
    if (i < 0 || i >= g.nodes_per_axis ||
        std::abs(u - static_cast<double>(i)) > 1e-6) {
      throw std::invalid_argument(
          "suite point does not coincide with a grid node");
    }
    idx[d] = i;
  }
  return g.flatten(idx);
}

Point resolve_point(const RunContext& ctx, const SuiteConfig& s) {
  const std::vector<double>& rs = s.name == "blowup" ? s.eps : s.radii;
  const double rmin = *std::min_element(rs.begin(), rs.end());
  const double rmax = *std::max_element(rs.begin(), rs.end());
  if (s.has_point) {
    const std::size_t i = point_node(ctx.grid, s.point);
    return ctx.grid.coords(i);  // snap to the exact node coordinates
  }
  const double density_r = std::max(4.0 * ctx.grid.spacing, rmin);
  return auto_point(ctx.geom, density_r, std::max(rmax, density_r));
}

ExperimentReport run_suite(const RunContext& ctx, const SuiteConfig& s,
                           std::map<std::string, GrowthTable>& growth_cache) {
  if (s.name == "optimal_regularity" || s.name == "nondegeneracy") {
    const Point x0 = resolve_point(ctx, s);
    const std::string key =
        json{{"p", {x0[0], x0[1], x0[2]}}, {"r", s.radii}}.dump();
    auto it = growth_cache.find(key);
    if (it == growth_cache.end()) {
      it = growth_cache
               .emplace(key, growth_table(ctx.result.w, x0, s.radii))
               .first;
    }
    ExperimentReport rep =
        s.name == "optimal_regularity"
            ? optimal_regularity_suite(ctx.result.w, ctx.geom, x0, s.radii,
                                       &it->second)
            : nondegeneracy_suite(ctx.result.w, ctx.geom, x0, s.radii,
                                  &it->second);
    rep.asserted = s.asserted;
    return rep;
  }
  if (s.name == "alternative") {
    ExperimentReport rep =
        alternative_suite(ctx.geom, fb_sample(ctx.geom, s.sample_stride),
                          s.radii);
    rep.asserted = s.asserted;
    return rep;
  }
  if (s.name == "measure_stability") {
    if (ctx.synthetic) {
      throw ConfigError(
          "suite \"measure_stability\" cannot run on a synthetic field");
    }
    StabilityInputs in;
    in.grid = ctx.grid;
    in.vary_rhs = s.vary_rhs;
    in.k = s.k;
    in.rhs = ctx.cfg.rhs;
    in.boundary = ctx.spec.boundary;
    in.t_levels = s.t_levels;
    in.mu_policy = s.mu_policy;
    in.mu_value = s.mu_value;
    in.method = ctx.cfg.solver.method;
    in.tol = ctx.cfg.solver.tol;
    in.max_iter = ctx.cfg.solver.max_iter;
    ExperimentReport rep = measure_stability_suite(in);
    rep.asserted = s.asserted;
    return rep;
  }
  if (s.name == "blowup") {
    const Point x0 = resolve_point(ctx, s);
    const Grid target = build_grid(ctx.grid.dim, 1.0, s.target_nodes);
    ExperimentReport rep = blowup_suite(ctx.result.w, ctx.geom,
                                        ctx.spec.coeff, x0, s.eps, target);
    rep.asserted = s.asserted;
    return rep;
  }
  if (s.name == "reifenberg") {
    ExperimentReport rep =
        reifenberg_suite(ctx.geom, fb_sample(ctx.geom, s.sample_stride),
                         s.radii, s.theta_cap);
    rep.asserted = s.asserted;
    return rep;
  }
  throw ConfigError("unknown suite \"" + s.name + "\"");
}

std::string sanitize_note(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

/// Parses "0.05", "1e-3" or "1/256".
double parse_value(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(text.substr(0, slash));
      const double den = std::stod(text.substr(slash + 1));
      if (den == 0.0) throw ConfigError("sweep value divides by zero: " + text);
      return num / den;
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
      throw ConfigError("sweep value is not a number: " + text);
    }
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("sweep value is not a number: " + text);
  } catch (const std::out_of_range&) {
    throw ConfigError("sweep value is out of range: " + text);
  }
}

RunConfig apply_param(const RunConfig& base, const std::string& param,
                      double value) {
  RunConfig cfg = base;
  if (param == "h") {
    const double m = 2.0 * cfg.grid.half_width / value + 1.0;
    const long mi = std::lround(m);
    if (std::abs(m - static_cast<double>(mi)) > 1e-6 || mi < 2) {
      throw ConfigError("sweep value for \"h\" must divide the box evenly");
    }
    cfg.grid.nodes_per_axis = static_cast<int>(mi);
    return cfg;
  }
  json j = serialize_config(cfg);
  json* node = &j;
  std::string rest = param;
  while (true) {
    const auto dot = rest.find('.');
    const std::string head = rest.substr(0, dot);
    auto it = node->find(head);
    if (it == node->end()) {
      throw ConfigError("sweep parameter \"" + param +
                        "\" does not exist in the config");
    }
    if (dot == std::string::npos) {
      if (it->is_number_integer()) {
        const long iv = std::lround(value);
        if (std::abs(value - static_cast<double>(iv)) > 1e-9) {
          throw ConfigError("sweep parameter \"" + param +
                            "\" requires an integer value");
        }
        *it = iv;
      } else if (it->is_number()) {
        *it = value;
      } else {
        throw ConfigError("sweep parameter \"" + param + "\" is not numeric");
      }
      break;
    }
    node = &*it;
    rest = rest.substr(dot + 1);
  }
  return parse_config(j);
}

struct SweepRow {
  double value = 0.0;
  int exit_code = kExitOk;
  bool converged = false;
  long iterations = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double energy = std::numeric_limits<double>::quiet_NaN();
  double error_nodal = std::numeric_limits<double>::quiet_NaN();
  double error_lattice = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

}  // namespace

double half_line_profile(double x) {
  const double p = std::max(x, 0.0);
  return 0.5 * p * p;
}

double radial_profile(double r, double r0) {
  if (r <= r0) return 0.0;
  return 0.25 * (r * r - r0 * r0) - 0.5 * r0 * r0 * std::log(r / r0);
}

ScalarField synthetic_field(const Grid& grid, const std::string& family) {
  ScalarField w = make_field(grid);
  const int last = grid.dim - 1;
  if (family == "line_contact") {
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      const double x1 = grid.coords(i)[0];
      w.values[i] = x1 * x1;
    }
  } else if (family == "quartic") {
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      const double xp = std::max(grid.coords(i)[last], 0.0);
      w.values[i] = xp * xp * xp * xp;
    }
  } else {
    throw ConfigError("unknown synthetic family \"" + family + "\"");
  }
  return w;
}

ScalarField boundary_field(const Grid& grid, const BoundaryConfig& b) {
  ScalarField psi = make_field(grid);
  const int last = grid.dim - 1;
  if (b.profile == "zero") {
    return psi;
  }
  if (b.profile == "half_space") {
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      const double xp = std::max(grid.coords(i)[last], 0.0);
      psi.values[i] = b.c * xp * xp;
    }
    return psi;
  }
  if (b.profile == "radial") {
    if (grid.dim != 2) {
      throw ConfigError("boundary profile \"radial\" requires dimension 2");
    }
    if (!(b.r0 < grid.half_width)) {
      throw ConfigError(
          "boundary profile \"radial\" requires r0 < half_width");
    }
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      const Point p = grid.coords(i);
      psi.values[i] = radial_profile(std::hypot(p[0], p[1]), b.r0);
    }
    return psi;
  }
  if (b.profile == "file") {
    const ScalarField fromfile = read_field(b.file);
    if (!fromfile.grid.same_layout(grid)) {
      throw ConfigError("boundary file grid does not match the config grid");
    }
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
      if (grid.is_boundary(i) && fromfile.values[i] < 0.0) {
        throw ConfigError("boundary file contains negative boundary values");
      }
    }
    return fromfile;
  }
  throw ConfigError("unknown boundary profile \"" + b.profile + "\"");
}

ScalarField reference_field(const Grid& grid, const ReferenceConfig& r) {
  const auto fn = reference_function(grid, r);
  ScalarField w = make_field(grid);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    w.values[i] = fn(grid.coords(i));
  }
  return w;
}

std::function<double(const Point&)> reference_function(
    const Grid& grid, const ReferenceConfig& r) {
  if (r.family == "half_line") {
    if (grid.dim != 1) {
      throw ConfigError("reference family \"half_line\" requires dimension 1");
    }
    return [](const Point& p) { return half_line_profile(p[0]); };
  }
  if (r.family == "radial") {
    if (grid.dim != 2) {
      throw ConfigError("reference family \"radial\" requires dimension 2");
    }
    const double r0 = r.r0;
    return [r0](const Point& p) {
      return radial_profile(std::hypot(p[0], p[1]), r0);
    };
  }
  throw ConfigError("unknown reference family \"" + r.family + "\"");
}

double nodal_error(const ScalarField& w, const ScalarField& exact) {
  double sup = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    sup = std::max(sup, std::abs(w.values[i] - exact.values[i]));
  }
  return sup;
}

double lattice_error(const ScalarField& w,
                     const std::function<double(const Point&)>& exact) {
  const Grid& g = w.grid;
  const int m = 2 * g.nodes_per_axis - 1;
  const double step = 0.5 * g.spacing;
  double sup = 0.0;
  std::array<int, 3> idx{0, 0, 0};
  const int n1 = g.dim >= 2 ? m : 1;
  const int n2 = g.dim >= 3 ? m : 1;
  for (int i0 = 0; i0 < m; ++i0) {
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int i2 = 0; i2 < n2; ++i2) {
        idx = {i0, i1, i2};
        Point p{0.0, 0.0, 0.0};
        for (int d = 0; d < g.dim; ++d) {
          p[d] = -g.half_width + step * idx[d];
        }
        sup = std::max(sup, std::abs(interpolate(w, p) - exact(p)));
      }
    }
  }
  return sup;
}

Point auto_point(const FreeBoundaryGeometry& geom, double density_radius,
                 double r_max) {
  const Grid& g = geom.grid;
  double best_gap = std::numeric_limits<double>::infinity();
  double best_dist = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  bool found = false;
  for (std::size_t i : geom.fb_nodes) {
    const Point p = g.coords(i);
    bool fits = true;
    for (int d = 0; d < g.dim; ++d) {
      if (std::abs(p[d]) + r_max > g.half_width + 1e-12) fits = false;
    }
    if (!fits) continue;
    const double gap = std::abs(contact_density(geom, p, density_radius) - 0.5);
    double dist2 = 0.0;
    for (int d = 0; d < g.dim; ++d) dist2 += p[d] * p[d];
    if (gap < best_gap - 1e-12 ||
        (gap < best_gap + 1e-12 && dist2 < best_dist - 1e-12)) {
      best_gap = gap;
      best_dist = dist2;
      best = i;
      found = true;
    }
  }
  if (!found) {
    throw std::invalid_argument(
        "no admissible free-boundary node for automatic point selection");
  }
  return g.coords(best);
}

std::vector<Point> fb_sample(const FreeBoundaryGeometry& geom, int stride) {
  const Grid& g = geom.grid;
  const double lim = 0.5 * g.half_width;
  std::vector<Point> out;
  int k = 0;
  for (std::size_t i : geom.fb_nodes) {
    const Point p = g.coords(i);
    double dist2 = 0.0;
    for (int d = 0; d < g.dim; ++d) dist2 += p[d] * p[d];
    if (dist2 >= lim * lim) continue;
    if (k++ % stride == 0) out.push_back(p);
  }
  return out;
}

RunArtifacts cmd_solve(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const std::string started = iso_now();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  RunContext ctx = build_and_solve(cfg);
  RunArtifacts art;
  art.files = write_solve_artifacts(ctx, dir);
  art.exit_code = ctx.result.converged ? kExitOk : kExitNoConverge;
  write_meta_and_manifest(
      dir, "solve", cfg, art.files, started,
      std::chrono::duration<double>(Clock::now() - t0).count());
  return art;
}

RunArtifacts cmd_verify(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const std::string started = iso_now();
  if (cfg.suites.empty()) {
    throw ConfigError("verify requires a non-empty \"suites\" block");
  }
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir / "reports");

  RunContext ctx = build_and_solve(cfg);
  RunArtifacts art;
  art.files = write_solve_artifacts(ctx, dir);
  if (!ctx.result.converged) {
    art.exit_code = kExitNoConverge;
    write_meta_and_manifest(
        dir, "verify", cfg, art.files, started,
        std::chrono::duration<double>(Clock::now() - t0).count());
    return art;
  }

  std::map<std::string, GrowthTable> growth_cache;
  bool asserted_failure = false;
  for (std::size_t k = 0; k < cfg.suites.size(); ++k) {
    const SuiteConfig& s = cfg.suites[k];
    const ExperimentReport rep = run_suite(ctx, s, growth_cache);
    if (rep.asserted && !rep.passed) asserted_failure = true;
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%02zu_", k + 1);
    const std::string stem = "reports/" + std::string(prefix) + s.name;
    write_json_file(dir / (stem + ".json"), rep.to_json());
    art.files.push_back(stem + ".json");
    write_text(dir / (stem + ".txt"), rep.to_text());
    art.files.push_back(stem + ".txt");
    write_text(dir / (stem + ".csv"), rep.to_csv());
    art.files.push_back(stem + ".csv");
  }
  art.exit_code = asserted_failure ? kExitSuiteFail : kExitOk;
  write_meta_and_manifest(
      dir, "verify", cfg, art.files, started,
      std::chrono::duration<double>(Clock::now() - t0).count());
  return art;
}

RunArtifacts cmd_sweep(const RunConfig& cfg, const std::string& param,
                       const std::vector<std::string>& values, int workers) {
  const auto t0 = Clock::now();
  const std::string started = iso_now();
  if (values.empty()) throw ConfigError("sweep requires at least one value");
  if (param.empty()) throw ConfigError("sweep requires a parameter name");

  std::vector<double> parsed;
  for (const auto& v : values) parsed.push_back(parse_value(v));
  // validate the parameter path up front so typos fail before any solve
  apply_param(cfg, param, parsed.front());

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  std::vector<SweepRow> rows(parsed.size());
  std::vector<std::vector<std::string>> subfiles(parsed.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= parsed.size()) return;
      SweepRow& row = rows[i];
      row.value = parsed[i];
      char sub[32];
      std::snprintf(sub, sizeof(sub), "sweep_%02zu", i);
      try {
        RunConfig sub_cfg = apply_param(cfg, param, parsed[i]);
        sub_cfg.output_dir = (dir / sub).string();
        const RunArtifacts sub_art = cmd_solve(sub_cfg);
        row.exit_code = sub_art.exit_code;
        for (const auto& f : sub_art.files) {
          subfiles[i].push_back(std::string(sub) + "/" + f);
        }
        std::ifstream in(dir / sub / "summary.json");
        json summary;
        in >> summary;
        row.converged = summary["converged"].get<bool>();
        row.iterations = summary["iterations"].get<long>();
        row.residual = summary["residual"].get<double>();
        row.energy = summary["energy"].get<double>();
        if (summary.contains("error_nodal")) {
          row.error_nodal = summary["error_nodal"].get<double>();
          row.error_lattice = summary["error_lattice"].get<double>();
        }
      } catch (const std::exception& e) {
        row.exit_code = kExitConfig;
        row.note = sanitize_note(e.what());
      }
    }
  };

  const int nw =
      std::max(1, std::min(workers, static_cast<int>(parsed.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const bool with_errors = cfg.reference.enabled;
  std::ostringstream csv;
  csv << param << ",exit_code,converged,iterations,residual,energy";
  if (with_errors) csv << ",error_nodal,error_lattice";
  csv << ",note\n";
  char buf[64];
  std::size_t succeeded = 0;
  for (const auto& row : rows) {
    if (row.exit_code == kExitOk) ++succeeded;
    std::snprintf(buf, sizeof(buf), "%.17g", row.value);
    csv << buf << "," << row.exit_code << "," << (row.converged ? 1 : 0) << ","
        << row.iterations << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", row.residual);
    csv << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", row.energy);
    csv << buf;
    if (with_errors) {
      std::snprintf(buf, sizeof(buf), "%.17g", row.error_nodal);
      csv << "," << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", row.error_lattice);
      csv << "," << buf;
    }
    csv << "," << row.note << "\n";
  }

  RunArtifacts art;
  write_text(dir / "sweep.csv", csv.str());
  art.files.push_back("sweep.csv");
  for (const auto& fl : subfiles) {
    art.files.insert(art.files.end(), fl.begin(), fl.end());
  }
  art.exit_code = succeeded > 0 ? kExitOk : kExitNoConverge;
  write_meta_and_manifest(
      dir, "sweep", cfg, art.files, started,
      std::chrono::duration<double>(Clock::now() - t0).count());
  return art;
}

}  // namespace oblab
