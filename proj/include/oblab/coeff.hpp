#pragma once

#include <array>
#include <string>
#include <vector>

#include "oblab/grid.hpp"

namespace oblab {

/// Symmetric matrix, up to 3x3. Off-diagonal order: (0,1), (0,2), (1,2).
struct SymMatrix {
  std::array<double, 3> diag{1.0, 1.0, 1.0};
  std::array<double, 3> off{0.0, 0.0, 0.0};

  static SymMatrix identity() { return SymMatrix{}; }
  double entry(int i, int j) const;
  void set_entry(int i, int j, double v);
};

/// Smallest/largest eigenvalue of the leading dim x dim block.
std::pair<double, double> eigen_range(const SymMatrix& a, int dim);

enum class CoeffFamily {
  identity,
  constant,
  smooth_oscillation,  // (1 + t sin(2 pi k x1) sin(2 pi k x2)) * I
  log_oscillation,     // (1 + amp sin(log|log(|x| + 1e-3)|)) * I
  checkerboard,        // (1 + t sign(sin(2 pi k x1)) sign(sin(2 pi k x2))) * I
};

struct CoeffSpec {
  CoeffFamily family = CoeffFamily::identity;
  double t = 0.0;
  double k = 1.0;
  double amplitude = 0.0;
  SymMatrix matrix;  // constant family only
};

enum class RhsFamily {
  constant,
  cosine,  // value * (1 + t cos(2 pi k x1))
};

struct RhsSpec {
  RhsFamily family = RhsFamily::constant;
  double value = 1.0;
  double t = 0.0;
  double k = 1.0;
};

/// Symmetric coefficient matrix a^{ij}(x) and right-hand side f(x) on grid
/// nodes, with certified bounds. Off-diagonal entries are stored per node so
/// that unsupported (variable off-diagonal) fields can be represented and
/// rejected downstream; every built-in family keeps them constant.
struct CoefficientField {
  Grid grid;
  std::array<std::vector<double>, 3> diag;
  std::array<std::vector<double>, 3> offd;
  std::vector<double> f;
  double lambda = 0.0;       // certified ellipticity: lambda <= eig <= Lambda
  double Lambda = 0.0;
  double lambda_star = 0.0;  // certified f range
  double Lambda_star = 0.0;
  std::string family_name;

  SymMatrix matrix_at(std::size_t node) const;
  double entry_at(std::size_t node, int i, int j) const;
  bool offdiag_is_constant() const;
};

/// Builds the field and certifies bounds by a per-node eigenvalue sweep.
/// Throws std::invalid_argument if ellipticity fails (lambda <= 0) or if the
/// certified f lower bound is not positive.
CoefficientField make_coefficients(const Grid& grid, const CoeffSpec& cs,
                                   const RhsSpec& rs);

struct VMOReport {
  std::vector<double> radii;  // increasing
  std::vector<double> eta;    // running max, nondecreasing in r
  int center_count = 0;
};

/// Mean-oscillation modulus: eta(r) = sup over sampled centers y and dyadic
/// rho <= r (rho >= 2h) of the ball average of |g - mean_{B_rho(y)} g|.
/// Centers are every center_stride-th node per axis with B_rho(y) inside the
/// box. Monotonicity in r is enforced by a running max.
VMOReport vmo_modulus(const ScalarField& g, std::vector<double> radii,
                      int center_stride = 4);

struct DeviationNorms {
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Entrywise L1/L2 distance of a^{ij} to a constant reference matrix over a
/// node set (all ordered entries; off-diagonal pairs count twice).
DeviationNorms coeff_distance_to_constant(const CoefficientField& a,
                                          const SymMatrix& ref,
                                          std::span<const std::size_t> nodes);

DeviationNorms rhs_distance_to_constant(const CoefficientField& a, double mu,
                                        std::span<const std::size_t> nodes);

}  // namespace oblab
