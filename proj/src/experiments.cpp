#include "oblab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace oblab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t node_at(const Grid& g, const Point& x) {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = 0; d < g.dim; ++d) {
    const double u = (x[d] + g.half_width) / g.spacing;
    const int i = static_cast<int>(std::lround(u));
    if (i < 0 || i >= g.nodes_per_axis ||
        std::abs(u - static_cast<double>(i)) > 1e-6) {
      throw std::invalid_argument("point does not coincide with a grid node");
    }
    idx[d] = i;
  }
  return g.flatten(idx);
}

void require_fb_node(const FreeBoundaryGeometry& geom, const Point& x) {
  const std::size_t i = node_at(geom.grid, x);
  if (!geom.fb[i]) {
    throw std::invalid_argument(
        "base point is not on the extracted free boundary");
  }
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

nlohmann::json grid_fingerprint(const Grid& g) {
  return {{"dim", g.dim},
          {"half_width", g.half_width},
          {"nodes_per_axis", g.nodes_per_axis},
          {"spacing", g.spacing}};
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["fingerprint"] = fingerprint;
  j["columns"] = columns;
  j["rows"] = rows;
  j["summary"] = summary;
  j["passed"] = passed;
  j["asserted"] = asserted;
  j["notes"] = notes;
  return j;
}

std::string ExperimentReport::to_text() const {
  std::ostringstream out;
  out << "suite: " << name << "\n";
  char buf[64];
  out << " ";
  for (const auto& c : columns) {
    std::snprintf(buf, sizeof(buf), " %14s", c.c_str());
    out << buf;
  }
  out << "\n";
  for (const auto& row : rows) {
    out << " ";
    for (double v : row) {
      std::snprintf(buf, sizeof(buf), " %14.6g", v);
      out << buf;
    }
    out << "\n";
  }
  if (!summary.empty()) out << "summary: " << summary.dump() << "\n";
  for (const auto& n : notes) out << "note: " << n << "\n";
  out << "result: " << (passed ? "pass" : "fail")
      << (asserted ? "" : " (not asserted)") << "\n";
  return out.str();
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << (c + 1 < columns.size() ? "," : "");
  }
  out << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
      out << buf << (c + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
  return out.str();
}

GrowthTable growth_table(const ScalarField& w, const Point& x0,
                         std::vector<double> radii) {
  std::sort(radii.begin(), radii.end(), std::greater<double>());
  const Grid& g = w.grid;
  GrowthTable t;
  for (double r : radii) {
    for (int d = 0; d < g.dim; ++d) {
      if (std::abs(x0[d]) + r > g.half_width + 1e-12) {
        throw std::invalid_argument("growth ball exceeds the box");
      }
    }
    const auto ball = ball_nodes(g, x0, r, BallClosure::closed);
    double sup = 0.0;
    for (std::size_t i : ball) sup = std::max(sup, w.values[i]);
    t.radii.push_back(r);
    t.sup.push_back(sup);
    t.ratio.push_back(sup / (r * r));
  }
  return t;
}

ExperimentReport optimal_regularity_suite(const ScalarField& w,
                                          const FreeBoundaryGeometry& geom,
                                          const Point& x0,
                                          const std::vector<double>& radii,
                                          const GrowthTable* shared) {
  const auto t0 = Clock::now();
  require_fb_node(geom, x0);
  const GrowthTable table =
      shared ? *shared : growth_table(w, x0, radii);

  ExperimentReport rep;
  rep.name = "optimal_regularity";
  rep.fingerprint = {{"grid", grid_fingerprint(w.grid)},
                     {"x0", {x0[0], x0[1], x0[2]}},
                     {"radii", table.radii}};
  rep.columns = {"r", "sup_w", "ratio"};
  for (std::size_t k = 0; k < table.radii.size(); ++k) {
    rep.rows.push_back({table.radii[k], table.sup[k], table.ratio[k]});
  }

  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (double v : table.ratio) {
    rmin = std::min(rmin, v);
    rmax = std::max(rmax, v);
  }
  const double med = median_of(table.ratio);
  const double last = table.ratio.back();
  const bool bounded = rmax <= 20.0 * rmin;
  const bool no_upward_tail = last <= 2.0 * med;

  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < table.ratio.size(); ++k) {
    if (table.ratio[k + 1] > table.ratio[k] * (1.0 + 1e-9)) decreasing = false;
  }
  const bool degenerate =
      decreasing && last <= 0.25 * table.ratio.front();

  rep.summary = {{"ratio_min", rmin},
                 {"ratio_max", rmax},
                 {"ratio_median", med},
                 {"ratio_last", last},
                 {"degenerate_not_quadratic", degenerate}};
  if (degenerate) {
    rep.notes.push_back(
        "growth ratios collapse toward zero: field is flatter than quadratic");
  }
  rep.passed = bounded && no_upward_tail;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

ExperimentReport nondegeneracy_suite(const ScalarField& w,
                                     const FreeBoundaryGeometry& geom,
                                     const Point& x0,
                                     const std::vector<double>& radii,
                                     const GrowthTable* shared) {
  const auto t0 = Clock::now();
  require_fb_node(geom, x0);
  const GrowthTable table =
      shared ? *shared : growth_table(w, x0, radii);

  ExperimentReport rep;
  rep.name = "nondegeneracy";
  rep.fingerprint = {{"grid", grid_fingerprint(w.grid)},
                     {"x0", {x0[0], x0[1], x0[2]}},
                     {"radii", table.radii}};
  rep.columns = {"r", "sup_w", "ratio"};
  double rmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < table.radii.size(); ++k) {
    rep.rows.push_back({table.radii[k], table.sup[k], table.ratio[k]});
    rmin = std::min(rmin, table.ratio[k]);
  }
  rep.summary = {{"ratio_min", rmin}, {"threshold", 1e-2}};
  rep.passed = rmin >= 1e-2;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

ExperimentReport alternative_suite(const FreeBoundaryGeometry& geom,
                                   const std::vector<Point>& points,
                                   const std::vector<double>& radii) {
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.name = "alternative";
  rep.fingerprint = {{"grid", grid_fingerprint(geom.grid)},
                     {"radii", radii},
                     {"points", points.size()}};
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  for (int d = 0; d < geom.grid.dim; ++d) {
    rep.columns.push_back("x" + std::to_string(d + 1));
  }
  for (double r : sorted) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "density_r%.6g", r);
    rep.columns.push_back(buf);
  }
  rep.columns.push_back("class");  // 0 regular, 1 singular, 2 undetermined

  int regular = 0, singular = 0, undetermined = 0;
  bool band_ok = true;
  for (const Point& x : points) {
    require_fb_node(geom, x);
    const auto cls = classify_point(geom, x, sorted);
    std::vector<double> row;
    for (int d = 0; d < geom.grid.dim; ++d) row.push_back(x[d]);
    for (double v : cls.densities) row.push_back(v);
    double code = 2.0;
    switch (cls.cls) {
      case PointClass::regular:
        code = 0.0;
        ++regular;
        if (cls.densities.back() < 0.4 || cls.densities.back() > 0.6) {
          band_ok = false;
        }
        break;
      case PointClass::singular:
        code = 1.0;
        ++singular;
        break;
      case PointClass::undetermined:
        code = 2.0;
        ++undetermined;
        break;
    }
    row.push_back(code);
    rep.rows.push_back(row);
  }
  rep.summary = {{"regular", regular},
                 {"singular", singular},
                 {"undetermined", undetermined}};
  rep.passed = undetermined == 0 && band_ok && !points.empty();
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

ExperimentReport measure_stability_suite(const StabilityInputs& in) {
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.name = "measure_stability";
  std::vector<double> levels = in.t_levels;
  std::sort(levels.begin(), levels.end(), std::greater<double>());
  rep.fingerprint = {{"grid", grid_fingerprint(in.grid)},
                     {"vary", in.vary_rhs ? "rhs" : "coefficients"},
                     {"k", in.k},
                     {"t_levels", levels},
                     {"mu_policy", in.mu_policy},
                     {"method", method_name(in.method)},
                     {"tol", in.tol}};
  rep.columns = {"t",         "coeff_dev_l2", "coeff_dev_l1", "rhs_dev_l1",
                 "rhs_dev_l2", "symm_diff",    "sup_diff",     "fb_hausdorff"};

  const auto region =
      ball_nodes(in.grid, Point{0.0, 0.0, 0.0}, in.grid.half_width);
  const double cellvol = in.grid.cell_volume();

  std::vector<double> sup_diffs, fb_dists;
  bool aborted = false;
  for (double t : levels) {
    CoeffSpec cs;
    RhsSpec rs = in.rhs;
    if (in.vary_rhs) {
      cs.family = CoeffFamily::identity;
      rs.family = RhsFamily::cosine;
      rs.t = t;
      rs.k = in.k;
    } else {
      cs.family = CoeffFamily::smooth_oscillation;
      cs.t = t;
      cs.k = in.k;
    }

    ObstacleProblemSpec spec;
    spec.grid = in.grid;
    spec.coeff = make_coefficients(in.grid, cs, rs);
    spec.boundary = in.boundary;
    spec.tol = in.tol;
    spec.max_iter = in.max_iter;

    const SolveResult w = solve_obstacle(spec, in.method);
    if (!w.converged) {
      rep.notes.push_back("solver failed to converge at t = " +
                          std::to_string(t) + "; table truncated");
      aborted = true;
      break;
    }

    double mu = in.mu_value;
    if (in.mu_policy == "mean_f") {
      double acc = 0.0;
      for (double v : spec.coeff.f) acc += v;
      mu = acc / static_cast<double>(spec.coeff.f.size());
    }
    const SolveResult u =
        constant_reference_solve(spec, w.w, SymMatrix::identity(), mu,
                                 in.method);
    if (!u.converged) {
      rep.notes.push_back("companion solve failed to converge at t = " +
                          std::to_string(t) + "; table truncated");
      aborted = true;
      break;
    }

    const auto adev =
        coeff_distance_to_constant(spec.coeff, SymMatrix::identity(), region);
    const auto fdev = rhs_distance_to_constant(spec.coeff, mu, region);

    const auto gw = extract_geometry(w.w);
    const auto gu = extract_geometry(u.w);
    double symm = 0.0;
    for (std::size_t i = 0; i < gw.contact.size(); ++i) {
      if (gw.contact[i] != gu.contact[i]) symm += cellvol;
    }

    double supd = 0.0;
    const double lim = 0.75 * in.grid.half_width + 1e-12;
    for (std::size_t i = 0; i < w.w.values.size(); ++i) {
      const Point p = in.grid.coords(i);
      bool inside = true;
      for (int d = 0; d < in.grid.dim; ++d) {
        if (std::abs(p[d]) > lim) inside = false;
      }
      if (inside) {
        supd = std::max(supd, std::abs(w.w.values[i] - u.w.values[i]));
      }
    }

    const auto dh =
        hausdorff_distance(gw.fb_points(), gu.fb_points(), in.grid.dim);
    const double dh_val = dh ? *dh : std::numeric_limits<double>::quiet_NaN();

    rep.rows.push_back(
        {t, adev.l2, adev.l1, fdev.l1, fdev.l2, symm, supd, dh_val});
    sup_diffs.push_back(supd);
    fb_dists.push_back(dh_val);
  }

  bool monotone = !rep.rows.empty();
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    for (std::size_t c : {5, 6, 7}) {  // symm_diff, sup_diff, fb_hausdorff
      const double a = rep.rows[k][c], b = rep.rows[k + 1][c];
      if (std::isnan(a) || std::isnan(b)) continue;
      if (b > a * (1.0 + 1e-9) + 1e-15) monotone = false;
    }
  }
  const double slope = loglog_slope(sup_diffs, fb_dists);
  rep.summary = {{"monotone", monotone},
                 {"sqrt_law_slope", slope},
                 {"slope_threshold", 0.45}};
  rep.passed = !aborted && monotone && slope >= 0.45;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

ExperimentReport blowup_suite(const ScalarField& w,
                              const FreeBoundaryGeometry& geom,
                              const CoefficientField& coeff, const Point& x0,
                              const std::vector<double>& eps_ladder,
                              const Grid& target) {
  const auto t0 = Clock::now();
  require_fb_node(geom, x0);
  std::vector<double> ladder = eps_ladder;
  std::sort(ladder.begin(), ladder.end(), std::greater<double>());

  ExperimentReport rep;
  rep.name = "blowup";
  rep.fingerprint = {{"grid", grid_fingerprint(w.grid)},
                     {"x0", {x0[0], x0[1], x0[2]}},
                     {"eps", ladder},
                     {"target", grid_fingerprint(target)}};

  const auto cls = classify_point(geom, x0, ladder);
  if (cls.cls != PointClass::regular) {
    rep.notes.push_back(
        "base point is not classified regular; blowup analysis aborted");
    rep.summary = {{"classification",
                    cls.cls == PointClass::singular ? "singular"
                                                    : "undetermined"}};
    rep.passed = false;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  const int dim = w.grid.dim;
  rep.columns = {"eps"};
  for (int d = 0; d < dim; ++d) {
    rep.columns.push_back("a" + std::to_string(d + 1) + std::to_string(d + 1) +
                          "_avg");
  }
  rep.columns.push_back("f_avg");
  rep.columns.push_back("rescale_diff");

  std::vector<ScalarField> rescalings;
  for (double eps : ladder) {
    rescalings.push_back(rescale(w, x0, eps, target));
  }
  const auto unit_ball =
      ball_nodes(target, Point{0.0, 0.0, 0.0},
                 std::min(1.0, target.half_width), BallClosure::closed);

  std::vector<double> diffs;
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    std::vector<double> row{ladder[k]};
    const auto ball = ball_nodes(w.grid, x0, ladder[k]);
    for (int d = 0; d < dim; ++d) {
      double acc = 0.0;
      for (std::size_t i : ball) acc += coeff.diag[d][i];
      row.push_back(acc / static_cast<double>(ball.size()));
    }
    double facc = 0.0;
    for (std::size_t i : ball) facc += coeff.f[i];
    row.push_back(facc / static_cast<double>(ball.size()));

    double diff = 0.0;
    if (k + 1 < ladder.size()) {
      for (std::size_t i : unit_ball) {
        diff = std::max(diff, std::abs(rescalings[k].values[i] -
                                       rescalings[k + 1].values[i]));
      }
      diffs.push_back(diff);
    }
    row.push_back(diff);
    rep.rows.push_back(row);
  }

  bool cauchy = true;
  for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
    if (diffs[k + 1] > diffs[k] * 1.05 + 1e-12) cauchy = false;
  }

  const BlowupFit fit = homogeneity_fit(rescalings.back());
  rep.summary = {{"fit_ok", fit.ok},
                 {"fit_residual", fit.residual},
                 {"fit_c", fit.c},
                 {"fit_direction", {fit.direction[0], fit.direction[1],
                                    fit.direction[2]}},
                 {"rescale_diffs", diffs},
                 {"residual_cap", 0.05}};
  rep.passed = fit.ok && cauchy && fit.residual <= 0.05;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

ExperimentReport reifenberg_suite(const FreeBoundaryGeometry& geom,
                                  const std::vector<Point>& sample,
                                  const std::vector<double>& radii,
                                  double theta_cap) {
  const auto t0 = Clock::now();
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  ExperimentReport rep;
  rep.name = "reifenberg";
  rep.fingerprint = {{"grid", grid_fingerprint(geom.grid)},
                     {"radii", sorted},
                     {"points", sample.size()},
                     {"theta_cap", theta_cap}};
  rep.columns = {"r", "theta_K"};

  if (sample.empty()) {
    rep.notes.push_back("empty free-boundary sample");
    rep.passed = false;
    rep.wall_seconds = seconds_since(t0);
    return rep;
  }

  for (const Point& x : sample) {
    require_fb_node(geom, x);
    const auto cls = classify_point(geom, x, sorted);
    if (cls.cls == PointClass::singular) {
      rep.notes.push_back(
          "sample contains a singular point; flatness hypothesis violated");
      rep.summary = {{"hypothesis_violation", true}};
      rep.passed = false;
      rep.wall_seconds = seconds_since(t0);
      return rep;
    }
  }

  std::vector<double> theta_k(sorted.size(), 0.0);
  bool any_skipped = false;
  for (const Point& x : sample) {
    const auto flat = flatness_modulus(geom, x, sorted);
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (flat.rows[k].skipped) any_skipped = true;
      theta_k[k] = std::max(theta_k[k], flat.theta[k]);
    }
  }
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    rep.rows.push_back({sorted[k], theta_k[k]});
  }

  bool tail_monotone = true;
  const std::size_t k0 = theta_k.size() > 3 ? theta_k.size() - 3 : 0;
  for (std::size_t k = k0; k + 1 < theta_k.size(); ++k) {
    if (theta_k[k + 1] > theta_k[k] * (1.0 + 1e-12)) tail_monotone = false;
  }
  rep.summary = {{"theta_at_rmin", theta_k.back()},
                 {"tail_monotone", tail_monotone},
                 {"skipped_rows", any_skipped}};
  rep.passed =
      !any_skipped && tail_monotone && theta_k.back() <= theta_cap;
  rep.wall_seconds = seconds_since(t0);
  return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && !std::isnan(x[i]) && !std::isnan(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace oblab
