// Acceptance harness. Each criterion prints exactly one PASS/FAIL line with
// its measured quantities and the pinned thresholds; the exit code is the
// number of failed criteria. Runs standalone (no test framework) because the
// criteria share expensive solves and must report even when they fail.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "oblab/experiments.hpp"
#include "oblab/run.hpp"

using namespace oblab;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RhsSpec unit_rhs() {
  RhsSpec r;
  r.value = 1.0;
  return r;
}

ObstacleProblemSpec make_spec(const Grid& g, const CoeffSpec& cs,
                              const BoundaryConfig& b, double tol) {
  ObstacleProblemSpec spec;
  spec.grid = g;
  spec.coeff = make_coefficients(g, cs, unit_rhs());
  spec.boundary = boundary_field(g, b);
  spec.tol = tol;
  return spec;
}

BoundaryConfig half_space_boundary(double c = 0.5) {
  BoundaryConfig b;
  b.profile = "half_space";
  b.c = c;
  return b;
}

BoundaryConfig radial_boundary(double r0 = 0.4) {
  BoundaryConfig b;
  b.profile = "radial";
  b.r0 = r0;
  return b;
}

SolveResult solve_half_line(int m, double tol = 1e-12,
                            SolveMethod method = SolveMethod::active_set) {
  const Grid g = build_grid(1, 1.0, m);
  return solve_obstacle(make_spec(g, CoeffSpec{}, half_space_boundary(), tol),
                        method);
}

SolveResult solve_radial(int m, double tol = 1e-12,
                         SolveMethod method = SolveMethod::active_set,
                         double r0 = 0.4) {
  const Grid g = build_grid(2, 1.0, m);
  return solve_obstacle(
      make_spec(g, CoeffSpec{}, radial_boundary(r0), tol), method);
}

SolveResult solve_half_space_2d(int m, double tol = 1e-12,
                                SolveMethod method = SolveMethod::active_set) {
  const Grid g = build_grid(2, 1.0, m);
  return solve_obstacle(make_spec(g, CoeffSpec{}, half_space_boundary(), tol),
                        method);
}

std::function<double(const Point&)> radial_fn(double r0) {
  return [r0](const Point& p) {
    return radial_profile(std::hypot(p[0], p[1]), r0);
  };
}

Point nearest_fb_node(const FreeBoundaryGeometry& geom, const Point& want) {
  double best = std::numeric_limits<double>::infinity();
  Point out{0.0, 0.0, 0.0};
  for (std::size_t i : geom.fb_nodes) {
    const Point p = geom.grid.coords(i);
    double d2 = 0.0;
    for (int d = 0; d < geom.grid.dim; ++d) {
      d2 += (p[d] - want[d]) * (p[d] - want[d]);
    }
    if (d2 < best) {
      best = d2;
      out = p;
    }
  }
  return out;
}

std::vector<double> dyadic_down(double top, double floor) {
  std::vector<double> out;
  for (double r = top; r >= floor - 1e-12; r /= 2.0) out.push_back(r);
  return out;
}

// shared fixtures, populated in order by the criteria
struct Fixtures {
  SolveResult rad513;
  FreeBoundaryGeometry rad513_geom;
  SolveResult hs257;
  FreeBoundaryGeometry hs257_geom;
  ExperimentReport stability;
} fx;

void criterion1() {
  const auto t0 = Clock::now();
  std::vector<double> errs;
  double fb_offset = 0.0, h_fine = 0.0;
  for (int m : {129, 257, 513}) {
    const SolveResult res = solve_half_line(m);
    if (!res.converged) {
      report(1, "half_line_convergence", false, "solver did not converge");
      return;
    }
    errs.push_back(lattice_error(
        res.w, [](const Point& p) {
          const double xp = std::max(p[0], 0.0);
          return 0.5 * xp * xp;
        }));
    if (m == 513) {
      h_fine = res.w.grid.spacing;
      const auto geom = extract_geometry(res.w);
      fb_offset = std::numeric_limits<double>::infinity();
      for (std::size_t i : geom.fb_nodes) {
        fb_offset = std::min(fb_offset, std::abs(geom.grid.coords(i)[0]));
      }
    }
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  const double secs = elapsed(t0);
  const bool pass = std::min(o1, o2) >= 1.8 && fb_offset <= 2.0 * h_fine &&
                    secs < 10.0;
  report(1, "half_line_convergence", pass,
         fmt("orders %.2f/%.2f (>= 1.8), fb offset %.2e (<= 2h = %.2e), "
             "%.1f s (< 10 s)",
             o1, o2, fb_offset, 2.0 * h_fine, secs));
}

void criterion2() {
  const auto t0 = Clock::now();
  std::vector<double> errs;
  double fb_radius_err = 0.0, h_fine = 1.0 / 256;
  for (int m : {129, 257, 513}) {
    const SolveResult res = solve_radial(m);
    if (!res.converged) {
      report(2, "radial_convergence", false, "solver did not converge");
      return;
    }
    errs.push_back(lattice_error(res.w, radial_fn(0.4)));
    if (m == 513) {
      fx.rad513 = res;
      fx.rad513_geom = extract_geometry(res.w);
      for (std::size_t i : fx.rad513_geom.fb_nodes) {
        const Point p = fx.rad513_geom.grid.coords(i);
        fb_radius_err = std::max(
            fb_radius_err, std::abs(std::hypot(p[0], p[1]) - 0.4));
      }
    }
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  const double secs = elapsed(t0);
  const bool pass = std::min(o1, o2) >= 1.5 &&
                    fb_radius_err <= 2.0 * h_fine && secs < 180.0;
  report(2, "radial_convergence", pass,
         fmt("orders %.2f/%.2f (>= 1.5), fb radius err %.2e (<= 2h = %.2e), "
             "%.1f s (< 180 s)",
             o1, o2, fb_radius_err, 2.0 * h_fine, secs));
}

void criterion3() {
  struct Case {
    const char* name;
    ObstacleProblemSpec spec;
  };
  std::vector<Case> cases;
  {
    const Grid g1 = build_grid(1, 1.0, 257);
    cases.push_back(
        {"half_line", make_spec(g1, CoeffSpec{}, half_space_boundary(), 1e-12)});
    const Grid g2 = build_grid(2, 1.0, 257);
    cases.push_back(
        {"radial", make_spec(g2, CoeffSpec{}, radial_boundary(), 1e-12)});
    const Grid g3 = build_grid(2, 1.0, 129);
    CoeffSpec osc;
    osc.family = CoeffFamily::smooth_oscillation;
    osc.t = 0.3;
    osc.k = 2.0;
    cases.push_back({"oscillation", make_spec(g3, osc, half_space_boundary(),
                                              1e-12)});
  }
  double worst_rel = 0.0, worst_res = 0.0;
  bool all_converged = true;
  for (const auto& c : cases) {
    const SolveResult a = solve_obstacle(c.spec, SolveMethod::psor);
    const SolveResult b = solve_obstacle(c.spec, SolveMethod::active_set);
    all_converged = all_converged && a.converged && b.converged;
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < a.w.values.size(); ++i) {
      diff = std::max(diff, std::abs(a.w.values[i] - b.w.values[i]));
      norm = std::max(norm, std::abs(b.w.values[i]));
    }
    worst_rel = std::max(worst_rel, diff / norm);
    worst_res = std::max(worst_res,
                         std::max(a.residual / a.scale, b.residual / b.scale));
  }
  const bool pass = all_converged && worst_rel <= 1e-6 && worst_res <= 1e-10;
  report(3, "solver_agreement", pass,
         fmt("max rel diff %.2e (<= 1e-6), max residual/scale %.2e "
             "(<= 1e-10), fixtures: half_line/radial/oscillation",
             worst_rel, worst_res));
}

void criterion4() {
  fx.hs257 = solve_half_space_2d(257);
  fx.hs257_geom = extract_geometry(fx.hs257.w);
  const Grid& g = fx.hs257.w.grid;
  const auto radii = dyadic_down(0.25, 8.0 * g.spacing);
  const GrowthTable hs = growth_table(fx.hs257.w, {0.0, 0.0, 0.0}, radii);
  double hs_dev = 0.0;
  for (double ratio : hs.ratio) {
    hs_dev = std::max(hs_dev, std::abs(ratio - 0.5));
  }

  const Grid& gr = fx.rad513.w.grid;
  const Point x0 = nearest_fb_node(fx.rad513_geom, {0.4, 0.0, 0.0});
  const auto radii_r = dyadic_down(0.25, 8.0 * gr.spacing);
  const GrowthTable rad = growth_table(fx.rad513.w, x0, radii_r);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (double ratio : rad.ratio) {
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }
  const bool pass = hs_dev <= 0.02 && rmin >= 1e-2 && rmax <= 20.0;
  report(4, "growth_and_nondegeneracy", pass,
         fmt("half-space sup/r^2 dev %.2e (<= 0.02), radial ratio in "
             "[%.3f, %.3f] (within [1e-2, 20])",
             hs_dev, rmin, rmax));
}

void criterion5() {
  const Grid& g = fx.hs257_geom.grid;
  double dens_dev = 0.0;
  for (double r : dyadic_down(0.25, 8.0 * g.spacing)) {
    dens_dev = std::max(
        dens_dev, std::abs(contact_density(fx.hs257_geom, {0.0, 0.0, 0.0}, r) -
                           0.5));
  }

  const Grid& gr = fx.rad513_geom.grid;
  const auto circle_pts = fb_sample(fx.rad513_geom, 16);
  const auto alt = alternative_suite(fx.rad513_geom, circle_pts,
                                     dyadic_down(0.25, 16.0 * gr.spacing));
  const int regular = alt.summary["regular"].get<int>();
  const int other = alt.summary["singular"].get<int>() +
                    alt.summary["undetermined"].get<int>();

  const Grid gl = build_grid(2, 1.0, 257);
  const auto line_geom =
      extract_geometry(synthetic_field(gl, "line_contact"), 0.0);
  const auto line_cls = classify_point(line_geom, {0.0, 0.0, 0.0},
                                       dyadic_down(0.25, 16.0 * gl.spacing));

  const bool pass = dens_dev <= 0.03 && other == 0 && regular > 0 &&
                    line_cls.cls == PointClass::singular;
  report(5, "density_alternative", pass,
         fmt("half-space density dev %.2e (<= 0.03), radial points "
             "%d regular / %d other, line contact %s",
             dens_dev, regular, other,
             line_cls.cls == PointClass::singular ? "singular"
                                                  : "not singular"));
}

void criterion6() {
  const auto t0 = Clock::now();
  StabilityInputs in;
  in.grid = build_grid(2, 1.0, 513);
  in.vary_rhs = false;
  in.k = 1.0;
  in.rhs = unit_rhs();
  in.boundary = boundary_field(in.grid, radial_boundary());
  in.t_levels = {0.4, 0.2, 0.1, 0.05};
  in.method = SolveMethod::active_set;
  in.tol = 1e-10;
  fx.stability = measure_stability_suite(in);

  const auto& rows = fx.stability.rows;
  bool strict = rows.size() == 4;
  for (std::size_t k = 0; strict && k + 1 < rows.size(); ++k) {
    if (!(rows[k + 1][5] < rows[k][5])) strict = false;
  }
  const double last = rows.empty() ? -1.0 : rows.back()[5];
  const double secs = elapsed(t0);
  const bool pass = strict && last <= 0.15 && secs < 300.0;
  report(6, "contact_measure_stability", pass,
         fmt("symmetric difference %s, final %.3f (<= 0.15 at t=0.05), "
             "%.0f s (< 300 s)",
             strict ? "strictly decreasing" : "NOT strictly decreasing", last,
             secs));
}

void criterion7() {
  const double slope =
      fx.stability.summary.value("sqrt_law_slope", std::nan(""));
  const bool pass = slope >= 0.45;
  report(7, "square_root_law", pass,
         fmt("loglog slope of D_H(FB,FB') vs sup|w-u| = %.3f (>= 0.45)",
             slope));
}

void criterion8() {
  const auto t0 = Clock::now();
  std::string detail;
  bool pass = true;
  struct Case {
    const char* name;
    CoeffSpec cs;
  };
  Case cases[2];
  cases[0].name = "radial";
  cases[1].name = "log_oscillation";
  cases[1].cs.family = CoeffFamily::log_oscillation;
  cases[1].cs.amplitude = 0.3;

  for (const Case& c : cases) {
    const Grid g = build_grid(2, 1.0, 1025);  // h = 1/512
    const SolveResult res = solve_obstacle(
        make_spec(g, c.cs, radial_boundary(), 1e-10), SolveMethod::active_set);
    if (!res.converged) {
      pass = false;
      detail += fmt("%s: no convergence; ", c.name);
      continue;
    }
    const auto geom = extract_geometry(res.w);
    const auto sample = fb_sample(geom, 32);
    const double h = g.spacing;
    const auto rep =
        reifenberg_suite(geom, sample, dyadic_down(128.0 * h, 16.0 * h), 0.1);
    const double theta_min = rep.rows.empty() ? 1.0 : rep.rows.back()[1];
    pass = pass && rep.passed;
    detail += fmt("%s theta(16h) = %.3f; ", c.name, theta_min);
  }
  detail += fmt("cap 0.1, %.0f s", elapsed(t0));
  report(8, "reifenberg_flatness", pass, detail);
}

void criterion9() {
  const Grid target = build_grid(2, 1.0, 33);

  const Grid& gr = fx.rad513.w.grid;
  const double hr = gr.spacing;
  const Point x0 = nearest_fb_node(fx.rad513_geom, {0.4, 0.0, 0.0});
  const auto rad_rep = blowup_suite(
      fx.rad513.w, fx.rad513_geom, make_coefficients(gr, CoeffSpec{}, unit_rhs()),
      x0, {64.0 * hr, 32.0 * hr, 16.0 * hr}, target);
  const double rad_res = rad_rep.summary.value("fit_residual", 1.0);

  const Grid& gh = fx.hs257.w.grid;
  const double hh = gh.spacing;
  const auto hs_rep = blowup_suite(
      fx.hs257.w, fx.hs257_geom,
      make_coefficients(gh, CoeffSpec{}, unit_rhs()), {0.0, 0.0, 0.0},
      {64.0 * hh, 32.0 * hh, 16.0 * hh}, target);
  const double hs_res = hs_rep.summary.value("fit_residual", 1.0);
  double dir_err = 1.0;
  if (hs_rep.summary.contains("fit_direction")) {
    const auto dir = hs_rep.summary["fit_direction"];
    dir_err = std::max(std::abs(dir[0].get<double>()),
                       std::abs(dir[1].get<double>() - 1.0));
  }

  const bool pass = rad_rep.passed && rad_res <= 0.05 && hs_rep.passed &&
                    hs_res <= 1e-10 && dir_err <= 1e-10;
  report(9, "blowup_classification", pass,
         fmt("radial fit residual %.3f (<= 0.05), half-space residual %.1e "
             "(<= 1e-10), direction err %.1e (<= 1e-10)",
             rad_res, hs_res, dir_err));
}

void criterion10() {
  const Grid g = build_grid(2, 1.0, 257);
  const ScalarField quartic = synthetic_field(g, "quartic");
  const auto qgeom = extract_geometry(quartic, 0.0);
  const auto nd = nondegeneracy_suite(quartic, qgeom, {0.0, 0.0, 0.0},
                                      dyadic_down(0.25, 1.0 / 32), nullptr);

  bool checker_completed = false;
  bool checker_pass_value = false;
  std::string checker_note = "threw";
  try {
    const Grid gc = build_grid(2, 1.0, 129);
    CoeffSpec cs;
    cs.family = CoeffFamily::checkerboard;
    cs.t = 0.25;
    cs.k = 2.0;
    const SolveResult res = solve_obstacle(
        make_spec(gc, cs, half_space_boundary(), 1e-10),
        SolveMethod::active_set);
    if (res.converged) {
      const auto geom = extract_geometry(res.w);
      const auto rep = reifenberg_suite(geom, fb_sample(geom, 8),
                                        dyadic_down(0.25, 1.0 / 16), 0.1);
      checker_completed = true;
      checker_pass_value = rep.passed;
      checker_note = rep.passed ? "reported pass" : "reported fail";
    } else {
      checker_note = "no convergence";
    }
  } catch (const std::exception& e) {
    checker_note = std::string("threw: ") + e.what();
  }

  // the quartic must fail; the non-VMO control must complete either way
  const bool pass = !nd.passed && checker_completed;
  (void)checker_pass_value;
  report(10, "negative_controls", pass,
         fmt("quartic nondegeneracy %s (must fail, min ratio %.1e), "
             "checkerboard run completed: %s (unasserted, %s)",
             nd.passed ? "PASSED" : "failed",
             nd.summary.value("ratio_min", -1.0),
             checker_completed ? "yes" : "no", checker_note.c_str()));
}

}  // namespace

int main() {
  std::printf("acceptance harness: 10 criteria, pinned tolerances\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures;
}
