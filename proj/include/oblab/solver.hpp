#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oblab/coeff.hpp"
#include "oblab/grid.hpp"

namespace oblab {

struct ObstacleProblemSpec {
  Grid grid;
  CoefficientField coeff;
  // Full field; only boundary-node entries are read. Must be >= 0 there.
  ScalarField boundary;
  double tol = 1e-10;
  long max_iter = 1000000;
};

enum class SolveMethod { psor, active_set };

std::string method_name(SolveMethod m);

/// K = -div(a grad .) over interior nodes: diagonal coefficients enter
/// through arithmetic face averages, constant off-diagonal coefficients
/// through centered cross differences. apply() reads x at every node and
/// writes interior rows only, so boundary data folds in by storing it in x.
struct DiscreteOperator {
  Grid grid;
  std::array<std::vector<double>, 3> face;  // face[d][i]: conductance/(h*h) between i and i+stride(d)
  std::array<double, 3> cross;              // off-diagonal a/(2 h^2), slots (0,1),(0,2),(1,2)
  std::vector<double> diag;
  std::vector<double> rhs_f;
  std::vector<double> load;  // F = f + boundary fold-in, interior rows
  double scale = 1.0;        // max(1, ||F||_inf)

  void apply(const std::vector<double>& x, std::vector<double>& out) const;
  double row_residual(const std::vector<double>& x, std::size_t i) const;  // (Kx)_i + f_i
};

/// Throws std::invalid_argument when off-diagonal entries vary in space.
DiscreteOperator assemble(const ObstacleProblemSpec& spec);

/// max_i |min(w_i, (Kw + f)_i)| over interior nodes.
double complementarity_residual(const DiscreteOperator& op,
                                const std::vector<double>& w);

struct SolveResult {
  ScalarField w;
  std::string method;
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double energy = 0.0;
  double scale = 1.0;
  std::vector<std::size_t> active_nodes;    // interior, w == 0
  std::vector<std::size_t> positive_nodes;  // interior, w > 0
};

/// Never throws on iteration-budget exhaustion: returns converged=false with
/// the last residual instead.
SolveResult solve_obstacle(const ObstacleProblemSpec& spec, SolveMethod method);

/// Midpoint-quadrature value of integral(a grad w . grad w + 2 f w).
double energy(const ObstacleProblemSpec& spec, const ScalarField& w);

struct EquivalenceReport {
  double weak_defect = 0.0;     // max |(Kw + f)_i| / scale over positive nodes
  double worst_margin = 0.0;    // min over competitors of J(v) - J(w)
  double energy_value = 0.0;
  int competitor_count = 0;
};

/// Cross-checks the complementarity solution against the variational form:
/// weak-form defect at inactive nodes plus random feasible competitors that
/// must not lower the energy.
EquivalenceReport equivalence_check(const ObstacleProblemSpec& spec,
                                    const SolveResult& result,
                                    std::uint64_t seed,
                                    int competitor_count = 100);

/// Companion solve with constant matrix A and constant right-hand side mu,
/// boundary data taken from w (its trace on the box boundary).
SolveResult constant_reference_solve(const ObstacleProblemSpec& base,
                                     const ScalarField& w, const SymMatrix& A,
                                     double mu, SolveMethod method);

}  // namespace oblab
