#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oblab/coeff.hpp"
#include "oblab/grid.hpp"
#include "oblab/solver.hpp"

namespace oblab {

/// Raised on any schema violation. The message names the offending key so a
/// mistyped tolerance cannot silently fall back to a default.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  int dim = 1;
  double half_width = 1.0;
  int nodes_per_axis = 129;
};

/// Dirichlet data on the box boundary. "zero" | "half_space" with
/// psi = c * max(x_last, 0)^2 | "radial" (2D, exact obstacle trace for
/// contact radius r0) | "file" with nodal values read from a field file.
struct BoundaryConfig {
  std::string profile = "zero";
  double c = 1.0;
  double r0 = 0.4;
  std::string file;
};

/// Bypasses the solver and analyzes a closed-form field instead. Used by
/// negative controls: "line_contact" w = x1^2 (contact set is a line),
/// "quartic" w = max(x_last, 0)^4 (flatter than quadratic).
struct SyntheticConfig {
  bool enabled = false;
  std::string family;
};

/// Optional closed-form reference solution; when present, solve/sweep
/// summaries gain sup-norm error columns. "half_line" w = max(x,0)^2 / 2
/// (1D) | "radial" with contact radius r0 (2D).
struct ReferenceConfig {
  bool enabled = false;
  std::string family;
  double r0 = 0.4;
};

struct SolverConfig {
  SolveMethod method = SolveMethod::active_set;
  double tol = 1e-10;
  long max_iter = 1000000;
};

struct SuiteConfig {
  std::string name;
  bool asserted = true;
  std::vector<double> radii;
  std::vector<double> eps;
  std::vector<double> t_levels;
  std::string point_policy = "auto";  // "auto" picks the FB node whose
                                      // finest density is nearest 1/2
  Point point{0.0, 0.0, 0.0};
  bool has_point = false;
  int sample_stride = 1;
  double theta_cap = 0.1;
  // measure_stability only
  bool vary_rhs = false;
  double k = 1.0;
  std::string mu_policy = "mean_f";
  double mu_value = 1.0;
  // blowup only; 33 nodes on [-1,1] keeps every rescale sample on a source
  // node whenever eps is a multiple of 16h
  int target_nodes = 33;
};

struct RunConfig {
  GridConfig grid;
  CoeffSpec coeff;
  RhsSpec rhs;
  BoundaryConfig boundary;
  SolverConfig solver;
  SyntheticConfig synthetic;
  ReferenceConfig reference;
  std::vector<SuiteConfig> suites;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

/// Strict parse: every key must be known and well-typed, family-specific
/// parameters are only accepted for the family that uses them.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Inverse of parse_config: parse_config(serialize_config(c)) == c and the
/// serialized JSON is key-sorted, so it doubles as a canonical fingerprint.
nlohmann::json serialize_config(const RunConfig& c);

std::string suite_list();

}  // namespace oblab
