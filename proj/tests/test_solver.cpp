#include <doctest.h>

#include <cmath>

#include "oblab/solver.hpp"
#include "oracles.hpp"

using namespace oblab;

namespace {

RhsSpec constant_rhs(double v) {
  RhsSpec r;
  r.value = v;
  return r;
}

ScalarField half_space_boundary(const Grid& g, double c) {
  return sample_field(g, [&](const Point& p) {
    const double xp = std::max(p[g.dim - 1], 0.0);
    return c * xp * xp;
  });
}

ObstacleProblemSpec half_line_spec(int nodes, double tol = 1e-12) {
  ObstacleProblemSpec spec;
  spec.grid = build_grid(1, 1.0, nodes);
  spec.coeff = make_coefficients(spec.grid, CoeffSpec{}, constant_rhs(1.0));
  spec.boundary = half_space_boundary(spec.grid, 0.5);
  spec.tol = tol;
  return spec;
}

}  // namespace

TEST_CASE("both solvers recover the half-line solution at the nodes") {
  const ObstacleProblemSpec spec = half_line_spec(65);
  for (auto method : {SolveMethod::psor, SolveMethod::active_set}) {
    const SolveResult res = solve_obstacle(spec, method);
    CHECK(res.converged);
    CHECK(res.iterations > 0);
    double err = 0.0;
    for (std::size_t i = 0; i < res.w.values.size(); ++i) {
      const double exact = oracles::half_line_exact(spec.grid.coords(i)[0]);
      err = std::max(err, std::abs(res.w.values[i] - exact));
    }
    // the piecewise quadratic satisfies the complementarity system row by
    // row, so the only nodal error is solver tolerance
    CHECK(err <= 1e-7);
    CHECK(res.residual <= spec.tol * res.scale);
  }
}

TEST_CASE("solutions satisfy the stencil complementarity system directly") {
  const ObstacleProblemSpec spec = half_line_spec(33);
  const SolveResult res = solve_obstacle(spec, SolveMethod::active_set);
  const double naive =
      oracles::naive_lcp_residual_identity(res.w, 1.0, spec.boundary);
  CHECK(naive <= spec.tol * res.scale * 4.0);
}

TEST_CASE("solver reports nonnegative values and complementary activity") {
  const ObstacleProblemSpec spec = half_line_spec(33);
  const SolveResult res = solve_obstacle(spec, SolveMethod::psor);
  for (double v : res.w.values) CHECK(v >= 0.0);
  CHECK(res.active_nodes.size() + res.positive_nodes.size() ==
        static_cast<std::size_t>(spec.grid.nodes_per_axis - 2));
}

TEST_CASE("zero boundary data yields the zero solution without iterations") {
  ObstacleProblemSpec spec = half_line_spec(33);
  spec.boundary = make_field(spec.grid);
  const SolveResult res = solve_obstacle(spec, SolveMethod::active_set);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  for (double v : res.w.values) CHECK(v == 0.0);
}

TEST_CASE("negative boundary data is rejected") {
  ObstacleProblemSpec spec = half_line_spec(33);
  spec.boundary.values[0] = -1e-3;
  CHECK_THROWS_AS(solve_obstacle(spec, SolveMethod::psor),
                  std::invalid_argument);
}

TEST_CASE("iteration budget exhaustion reports nonconvergence gracefully") {
  ObstacleProblemSpec spec = half_line_spec(65);
  spec.max_iter = 3;
  const SolveResult res = solve_obstacle(spec, SolveMethod::psor);
  CHECK_FALSE(res.converged);
  CHECK(res.residual > spec.tol * res.scale);
}

TEST_CASE("the two methods agree on a variable-coefficient 2D problem") {
  ObstacleProblemSpec spec;
  spec.grid = build_grid(2, 1.0, 33);
  CoeffSpec cs;
  cs.family = CoeffFamily::smooth_oscillation;
  cs.t = 0.3;
  cs.k = 2.0;
  spec.coeff = make_coefficients(spec.grid, cs, constant_rhs(1.0));
  spec.boundary = half_space_boundary(spec.grid, 0.5);
  spec.tol = 1e-12;

  const SolveResult a = solve_obstacle(spec, SolveMethod::psor);
  const SolveResult b = solve_obstacle(spec, SolveMethod::active_set);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < a.w.values.size(); ++i) {
    diff = std::max(diff, std::abs(a.w.values[i] - b.w.values[i]));
    norm = std::max(norm, std::abs(a.w.values[i]));
  }
  CHECK(diff <= 1e-6 * norm);
  CHECK(complementarity_residual(assemble(spec), a.w.values) <=
        spec.tol * a.scale);
  CHECK(complementarity_residual(assemble(spec), b.w.values) <=
        spec.tol * b.scale);
}

TEST_CASE("constant off-diagonal entries assemble and solve") {
  ObstacleProblemSpec spec;
  spec.grid = build_grid(2, 1.0, 33);
  CoeffSpec cs;
  cs.family = CoeffFamily::constant;
  cs.matrix = SymMatrix::identity();
  cs.matrix.set_entry(0, 1, 0.25);
  spec.coeff = make_coefficients(spec.grid, cs, constant_rhs(1.0));
  spec.boundary = half_space_boundary(spec.grid, 0.5);
  spec.tol = 1e-11;
  const SolveResult a = solve_obstacle(spec, SolveMethod::psor);
  const SolveResult b = solve_obstacle(spec, SolveMethod::active_set);
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  for (std::size_t i = 0; i < a.w.values.size(); ++i) {
    CHECK(std::abs(a.w.values[i] - b.w.values[i]) <= 1e-6);
  }
}

TEST_CASE("energy of the half-line solution approaches its integral") {
  // integral of (w')^2 + 2 f w over [-1, 1] with w = max(x,0)^2/2 is
  // 1/3 + 1/3 = 2/3
  const ObstacleProblemSpec spec = half_line_spec(129);
  const SolveResult res = solve_obstacle(spec, SolveMethod::active_set);
  CHECK(res.energy == doctest::Approx(2.0 / 3.0).epsilon(5e-3));
}

TEST_CASE("solutions pass the randomized minimality check") {
  const ObstacleProblemSpec spec = half_line_spec(65);
  const SolveResult res = solve_obstacle(spec, SolveMethod::active_set);
  const EquivalenceReport eq = equivalence_check(spec, res, 42);
  CHECK(eq.competitor_count == 100);
  CHECK(eq.weak_defect <= 1e-8);
  CHECK(eq.worst_margin >= -1e-10);

  // deterministic for a fixed seed
  const EquivalenceReport eq2 = equivalence_check(spec, res, 42);
  CHECK(eq.worst_margin == eq2.worst_margin);
  CHECK(eq.weak_defect == eq2.weak_defect);
}

TEST_CASE("constant-coefficient companion reproduces an identity solve") {
  const ObstacleProblemSpec spec = half_line_spec(65);
  const SolveResult res = solve_obstacle(spec, SolveMethod::active_set);
  const SolveResult companion = constant_reference_solve(
      spec, res.w, SymMatrix::identity(), 1.0, SolveMethod::active_set);
  REQUIRE(companion.converged);
  for (std::size_t i = 0; i < res.w.values.size(); ++i) {
    CHECK(std::abs(companion.w.values[i] - res.w.values[i]) <= 1e-8);
  }
}
