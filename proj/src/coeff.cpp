#include "oblab/coeff.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace oblab {

namespace {

int off_slot(int i, int j) {
  // (0,1)->0, (0,2)->1, (1,2)->2
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return 0;
  if (i == 0 && j == 2) return 1;
  return 2;
}

double checker_sign(double s) {
  if (s > 0.0) return 1.0;
  if (s < 0.0) return -1.0;
  return 0.0;
}

}  // namespace

double SymMatrix::entry(int i, int j) const {
  return (i == j) ? diag[i] : off[off_slot(i, j)];
}

void SymMatrix::set_entry(int i, int j, double v) {
  if (i == j) {
    diag[i] = v;
  } else {
    off[off_slot(i, j)] = v;
  }
}

std::pair<double, double> eigen_range(const SymMatrix& a, int dim) {
  Eigen::MatrixXd b(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) b(i, j) = a.entry(i, j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

SymMatrix CoefficientField::matrix_at(std::size_t node) const {
  SymMatrix m;
  for (int d = 0; d < grid.dim; ++d) m.diag[d] = diag[d][node];
  for (int s = 0; s < 3; ++s) m.off[s] = offd[s].empty() ? 0.0 : offd[s][node];
  return m;
}

double CoefficientField::entry_at(std::size_t node, int i, int j) const {
  if (i == j) return diag[i][node];
  const auto& v = offd[off_slot(i, j)];
  return v.empty() ? 0.0 : v[node];
}

bool CoefficientField::offdiag_is_constant() const {
  for (int s = 0; s < 3; ++s) {
    if (offd[s].empty()) continue;
    const double v0 = offd[s][0];
    for (double v : offd[s]) {
      if (v != v0) return false;
    }
  }
  return true;
}

CoefficientField make_coefficients(const Grid& grid, const CoeffSpec& cs,
                                   const RhsSpec& rs) {
  const std::size_t n = grid.node_count();
  CoefficientField out;
  out.grid = grid;
  for (int d = 0; d < grid.dim; ++d) out.diag[d].assign(n, 1.0);
  for (int s = 0; s < 3; ++s) out.offd[s].assign(n, 0.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  switch (cs.family) {
    case CoeffFamily::identity:
      out.family_name = "identity";
      break;
    case CoeffFamily::constant: {
      out.family_name = "constant";
      for (std::size_t i = 0; i < n; ++i) {
        for (int d = 0; d < grid.dim; ++d) out.diag[d][i] = cs.matrix.diag[d];
        for (int s = 0; s < 3; ++s) out.offd[s][i] = cs.matrix.off[s];
      }
      break;
    }
    case CoeffFamily::smooth_oscillation: {
      out.family_name = "smooth_oscillation";
      if (std::abs(cs.t) > 0.5) {
        throw std::invalid_argument(
            "smooth_oscillation amplitude |t| must be <= 0.5: "
            "ellipticity violated");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const Point p = grid.coords(i);
        double osc = std::sin(two_pi * cs.k * p[0]);
        if (grid.dim >= 2) osc *= std::sin(two_pi * cs.k * p[1]);
        const double v = 1.0 + cs.t * osc;
        for (int d = 0; d < grid.dim; ++d) out.diag[d][i] = v;
      }
      break;
    }
    case CoeffFamily::log_oscillation: {
      out.family_name = "log_oscillation";
      constexpr double eps0 = 1e-3;
      for (std::size_t i = 0; i < n; ++i) {
        const Point p = grid.coords(i);
        const double r = distance(p, Point{0.0, 0.0, 0.0}, grid.dim);
        const double v =
            1.0 + cs.amplitude * std::sin(std::log(std::abs(std::log(r + eps0))));
        for (int d = 0; d < grid.dim; ++d) out.diag[d][i] = v;
      }
      break;
    }
    case CoeffFamily::checkerboard: {
      out.family_name = "checkerboard";
      for (std::size_t i = 0; i < n; ++i) {
        const Point p = grid.coords(i);
        double s = checker_sign(std::sin(two_pi * cs.k * p[0]));
        if (grid.dim >= 2) s *= checker_sign(std::sin(two_pi * cs.k * p[1]));
        const double v = 1.0 + cs.t * s;
        for (int d = 0; d < grid.dim; ++d) out.diag[d][i] = v;
      }
      break;
    }
  }

  out.f.resize(n);
  switch (rs.family) {
    case RhsFamily::constant:
      for (std::size_t i = 0; i < n; ++i) out.f[i] = rs.value;
      break;
    case RhsFamily::cosine:
      for (std::size_t i = 0; i < n; ++i) {
        const Point p = grid.coords(i);
        out.f[i] = rs.value * (1.0 + rs.t * std::cos(two_pi * rs.k * p[0]));
      }
      break;
  }

  // certify bounds by a direct per-node eigenvalue sweep
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [emin, emax] = eigen_range(out.matrix_at(i), grid.dim);
    lo = std::min(lo, emin);
    hi = std::max(hi, emax);
  }
  out.lambda = lo;
  out.Lambda = hi;
  if (!(out.lambda > 0.0)) {
    throw std::invalid_argument(
        "coefficient family violates ellipticity: certified lambda = " +
        std::to_string(out.lambda));
  }

  double flo = std::numeric_limits<double>::infinity();
  double fhi = -flo;
  for (double v : out.f) {
    flo = std::min(flo, v);
    fhi = std::max(fhi, v);
  }
  out.lambda_star = flo;
  out.Lambda_star = fhi;
  if (!(out.lambda_star > 0.0)) {
    throw std::invalid_argument(
        "right-hand side must be uniformly positive: certified lower bound = " +
        std::to_string(out.lambda_star));
  }
  return out;
}

VMOReport vmo_modulus(const ScalarField& g, std::vector<double> radii,
                      int center_stride) {
  if (center_stride < 1) {
    throw std::invalid_argument("center_stride must be >= 1");
  }
  const Grid& grid = g.grid;
  const double h = grid.spacing;
  std::sort(radii.begin(), radii.end());
  for (double r : radii) {
    if (r < 2.0 * h) {
      throw std::invalid_argument(
          "oscillation radius below resolution floor 2h");
    }
  }

  VMOReport rep;
  rep.radii = radii;
  rep.eta.assign(radii.size(), 0.0);

  // candidate centers: every center_stride-th interior node per axis
  std::vector<std::size_t> centers;
  {
    const int m = grid.nodes_per_axis;
    std::array<int, 3> idx{0, 0, 0};
    const int top = m - 1;
    auto step = [&](int lo) { return std::min(lo + center_stride, top); };
    for (idx[0] = 1; idx[0] < top; idx[0] = step(idx[0])) {
      if (grid.dim == 1) {
        centers.push_back(grid.flatten(idx));
        continue;
      }
      for (idx[1] = 1; idx[1] < top; idx[1] = step(idx[1])) {
        if (grid.dim == 2) {
          centers.push_back(grid.flatten(idx));
          continue;
        }
        for (idx[2] = 1; idx[2] < top; idx[2] = step(idx[2])) {
          centers.push_back(grid.flatten(idx));
        }
      }
    }
    rep.center_count = static_cast<int>(centers.size());
  }

  auto ball_inside = [&](const Point& c, double rho) {
    for (int d = 0; d < grid.dim; ++d) {
      if (std::abs(c[d]) + rho > grid.half_width + 1e-12) return false;
    }
    return true;
  };

  for (std::size_t k = 0; k < radii.size(); ++k) {
    double worst = 0.0;
    for (double rho = radii[k]; rho >= 2.0 * h - 1e-12; rho /= 2.0) {
      for (std::size_t c : centers) {
        const Point pc = grid.coords(c);
        if (!ball_inside(pc, rho)) continue;
        const auto nodes = ball_nodes(grid, pc, rho);
        if (nodes.empty()) continue;
        double mean = 0.0;
        for (std::size_t i : nodes) mean += g.values[i];
        mean /= static_cast<double>(nodes.size());
        double osc = 0.0;
        for (std::size_t i : nodes) osc += std::abs(g.values[i] - mean);
        osc /= static_cast<double>(nodes.size());
        worst = std::max(worst, osc);
      }
    }
    rep.eta[k] = worst;
  }
  // running max keeps the modulus nondecreasing
  for (std::size_t k = 1; k < rep.eta.size(); ++k) {
    rep.eta[k] = std::max(rep.eta[k], rep.eta[k - 1]);
  }
  return rep;
}

DeviationNorms coeff_distance_to_constant(const CoefficientField& a,
                                          const SymMatrix& ref,
                                          std::span<const std::size_t> nodes) {
  const double vol = a.grid.cell_volume();
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t node : nodes) {
    for (int i = 0; i < a.grid.dim; ++i) {
      for (int j = 0; j < a.grid.dim; ++j) {
        const double d = a.entry_at(node, i, j) - ref.entry(i, j);
        l1 += std::abs(d);
        l2 += d * d;
      }
    }
  }
  return {l1 * vol, std::sqrt(l2 * vol)};
}

DeviationNorms rhs_distance_to_constant(const CoefficientField& a, double mu,
                                        std::span<const std::size_t> nodes) {
  const double vol = a.grid.cell_volume();
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t node : nodes) {
    const double d = a.f[node] - mu;
    l1 += std::abs(d);
    l2 += d * d;
  }
  return {l1 * vol, std::sqrt(l2 * vol)};
}

}  // namespace oblab
