#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oblab/config.hpp"
#include "oblab/experiments.hpp"
#include "oblab/fb.hpp"

namespace oblab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConverge = 3;
inline constexpr int kExitSuiteFail = 4;

/// Closed-form fields shared by boundary profiles, synthetic controls and
/// reference error columns.
double half_line_profile(double x);           // max(x, 0)^2 / 2
double radial_profile(double r, double r0);   // 2D, f = 1, contact B_{r0}
ScalarField synthetic_field(const Grid& grid, const std::string& family);
ScalarField boundary_field(const Grid& grid, const BoundaryConfig& b);
ScalarField reference_field(const Grid& grid, const ReferenceConfig& r);
std::function<double(const Point&)> reference_function(const Grid& grid,
                                                       const ReferenceConfig& r);

/// Max over nodes of |w_i - exact_i|.
double nodal_error(const ScalarField& w, const ScalarField& exact);

/// Sup over a twice-refined sample lattice (nodes and midpoints) of
/// |interpolated w - exact|. Nodal sups hide the interpolation error on
/// fixtures whose free boundary sits exactly on a node.
double lattice_error(const ScalarField& w,
                     const std::function<double(const Point&)>& exact);

/// FB node whose contact density at radius r is nearest 1/2, preferring the
/// node closest to the origin; only nodes with B_{r_max} inside the box are
/// candidates.
Point auto_point(const FreeBoundaryGeometry& geom, double density_radius,
                 double r_max);

/// Every stride-th free-boundary node inside the open ball B_{half_width/2}.
std::vector<Point> fb_sample(const FreeBoundaryGeometry& geom, int stride);

struct RunArtifacts {
  int exit_code = kExitOk;
  std::vector<std::string> files;  // relative to the output directory
};

RunArtifacts cmd_solve(const RunConfig& cfg);
RunArtifacts cmd_verify(const RunConfig& cfg);
RunArtifacts cmd_sweep(const RunConfig& cfg, const std::string& param,
                       const std::vector<std::string>& values, int workers);

}  // namespace oblab
