#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "oblab/grid.hpp"

namespace oblab {

/// Interior-node partition of a solution field: positivity set {w > tau},
/// contact set (complement), and the free boundary layer (contact nodes with
/// an axis neighbor in the positivity set). Boundary nodes belong to neither.
struct FreeBoundaryGeometry {
  Grid grid;
  double tau_pos = 0.0;
  std::vector<std::uint8_t> positive;
  std::vector<std::uint8_t> contact;
  std::vector<std::uint8_t> fb;
  std::vector<std::size_t> positive_nodes;
  std::vector<std::size_t> contact_nodes;
  std::vector<std::size_t> fb_nodes;

  std::vector<Point> fb_points() const;
};

/// tau_pos < 0 selects the default threshold spacing^2 / 100.
FreeBoundaryGeometry extract_geometry(const ScalarField& w,
                                      double tau_pos = -1.0);

/// |contact ∩ B_r(x)| / |B_r(x)| with contact nodes on the free-boundary
/// layer counted at half weight (they straddle the interface; full weight
/// systematically overcounts by O(h/r) and breaks reflection symmetry).
/// Requires r >= 4h and B_r(x) inside the box.
double contact_density(const FreeBoundaryGeometry& geom, const Point& x,
                       double r);

enum class PointClass { regular, singular, undetermined };

struct ClassifyResult {
  PointClass cls = PointClass::undetermined;
  std::vector<double> radii;      // descending
  std::vector<double> densities;  // aligned with radii
};

/// Density alternative at a free-boundary point: regular when the density at
/// the finest radius sits in [0.4, 0.6] and |density - 1/2| does not grow
/// (0.02 slack) over the last three radii; singular when it is <= 0.1.
ClassifyResult classify_point(const FreeBoundaryGeometry& geom, const Point& x,
                              std::vector<double> radii);

/// w_eps(y) = eps^-2 w(x0 + eps y) on the target grid via multilinear
/// interpolation. Requires eps >= 16 * source spacing and the mapped target
/// box inside the source box.
ScalarField rescale(const ScalarField& w, const Point& x0, double eps,
                    const Grid& target);

/// Symmetric Hausdorff distance; empty input yields no value.
std::optional<double> hausdorff_distance(std::span<const Point> a,
                                         std::span<const Point> b, int dim);

struct Hyperplane {
  Point point{0.0, 0.0, 0.0};   // contained in the plane (the query point x)
  Point normal{1.0, 0.0, 0.0};  // unit
  int support = 0;
  bool degenerate = false;
};

/// Total-least-squares hyperplane through x: normal is the smallest principal
/// direction of the second-moment matrix of the points centered at x.
/// Degenerate when fewer than dim points are given.
Hyperplane best_plane(std::span<const Point> points, const Point& x, int dim);

struct FlatnessRow {
  double r = 0.0;
  double dist = 0.0;   // Hausdorff(plane cap sampled at h/2, FB cap)
  double ratio = 0.0;  // dist / r
  bool skipped = false;
  Hyperplane plane;
};

struct FlatnessReport {
  Point x{0.0, 0.0, 0.0};
  std::vector<FlatnessRow> rows;  // descending radius
  std::vector<double> theta;      // running sup of ratio over rho <= r
};

FlatnessReport flatness_modulus(const FreeBoundaryGeometry& geom,
                                const Point& x, std::vector<double> radii);

struct BlowupFit {
  bool ok = false;
  Point direction{0.0, 0.0, 0.0};
  double c = 0.0;
  double residual = 0.0;  // relative sup-norm misfit on the unit ball
};

/// Fits c ((e.x)^+)^2 over the unit ball of a rescaled field by angular
/// search (64 samples, two x4 refinements) with closed-form c per direction.
BlowupFit homogeneity_fit(const ScalarField& rescaled);

}  // namespace oblab
