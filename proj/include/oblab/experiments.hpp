#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "oblab/coeff.hpp"
#include "oblab/fb.hpp"
#include "oblab/grid.hpp"
#include "oblab/solver.hpp"

namespace oblab {

/// Tabular result of one verification suite. Serialization is deterministic:
/// wall_seconds is kept out of to_json so reruns with the same inputs produce
/// byte-identical reports.
struct ExperimentReport {
  std::string name;
  nlohmann::json fingerprint;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary;
  bool passed = false;
  bool asserted = true;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
  std::string to_text() const;
  std::string to_csv() const;
};

/// sup_{B_r(x0)} w (closed node ball) and sup/r^2 per radius, descending.
struct GrowthTable {
  std::vector<double> radii;
  std::vector<double> sup;
  std::vector<double> ratio;
};

GrowthTable growth_table(const ScalarField& w, const Point& x0,
                         std::vector<double> radii);

/// Quadratic growth: ratios sup w / r^2 bounded (max/min <= 20) with no
/// upward trend at the finest radius. x0 must be a free-boundary node.
ExperimentReport optimal_regularity_suite(const ScalarField& w,
                                          const FreeBoundaryGeometry& geom,
                                          const Point& x0,
                                          const std::vector<double>& radii,
                                          const GrowthTable* shared = nullptr);

/// Nondegeneracy: min over radii of sup w / r^2 >= 1e-2.
ExperimentReport nondegeneracy_suite(const ScalarField& w,
                                     const FreeBoundaryGeometry& geom,
                                     const Point& x0,
                                     const std::vector<double>& radii,
                                     const GrowthTable* shared = nullptr);

/// Per-point density tables and the regular/singular alternative.
ExperimentReport alternative_suite(const FreeBoundaryGeometry& geom,
                                   const std::vector<Point>& points,
                                   const std::vector<double>& radii);

struct StabilityInputs {
  Grid grid;
  bool vary_rhs = false;  // false: a = smooth_oscillation(t), f fixed
                          // true:  a = identity, f = value*(1 + t cos(2 pi k x1))
  double k = 1.0;
  RhsSpec rhs;            // base right-hand side (vary_rhs=false)
  ScalarField boundary;
  std::vector<double> t_levels;  // processed in descending order
  std::string mu_policy = "mean_f";  // "mean_f" | "value"
  double mu_value = 1.0;
  SolveMethod method = SolveMethod::active_set;
  double tol = 1e-10;
  long max_iter = 1000000;
};

/// Perturbation sweep against the constant-coefficient companion solve:
/// deviation norms of the data, contact-set symmetric difference, sup
/// distance on the 3/4-box and free-boundary Hausdorff distance per level.
ExperimentReport measure_stability_suite(const StabilityInputs& in);

/// Coefficient/f ball averages across the epsilon ladder, sup differences of
/// successive rescalings, homogeneity fit of the finest rescaling.
ExperimentReport blowup_suite(const ScalarField& w,
                              const FreeBoundaryGeometry& geom,
                              const CoefficientField& coeff, const Point& x0,
                              const std::vector<double>& eps_ladder,
                              const Grid& target);

/// Flatness modulus maximized over a compact free-boundary sample.
ExperimentReport reifenberg_suite(const FreeBoundaryGeometry& geom,
                                  const std::vector<Point>& sample,
                                  const std::vector<double>& radii,
                                  double theta_cap = 0.1);

/// Least-squares slope of log(y) against log(x) over pairs with x,y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace oblab
