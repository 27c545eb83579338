#include "oblab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oblab {

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double t = a[d] - b[d];
    s += t * t;
  }
  return std::sqrt(s);
}

std::size_t Grid::node_count() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(nodes_per_axis);
  return n;
}

std::size_t Grid::stride(int d) const {
  // lexicographic order over (i0, i1, i2): the last axis varies fastest
  std::size_t s = 1;
  for (int k = dim - 1; k > d; --k) s *= static_cast<std::size_t>(nodes_per_axis);
  return s;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim; ++d) {
    flat = flat * static_cast<std::size_t>(nodes_per_axis) +
           static_cast<std::size_t>(idx[d]);
  }
  return flat;
}

std::array<int, 3> Grid::unflatten(std::size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(node % static_cast<std::size_t>(nodes_per_axis));
    node /= static_cast<std::size_t>(nodes_per_axis);
  }
  return idx;
}

double Grid::axis_coord(int i) const {
  // form chosen so that corners are exact and coord(m-1-i) == -coord(i)
  const double m1 = static_cast<double>(nodes_per_axis - 1);
  return half_width * (2.0 * static_cast<double>(i) - m1) / m1;
}

Point Grid::coords(std::size_t node) const {
  const auto idx = unflatten(node);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < dim; ++d) p[d] = axis_coord(idx[d]);
  return p;
}

bool Grid::is_boundary(std::size_t node) const {
  const auto idx = unflatten(node);
  for (int d = 0; d < dim; ++d) {
    if (idx[d] == 0 || idx[d] == nodes_per_axis - 1) return true;
  }
  return false;
}

std::vector<bool> Grid::boundary_mask() const {
  std::vector<bool> mask(node_count());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = is_boundary(i);
  return mask;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int d = 0; d < dim; ++d) v *= spacing;
  return v;
}

bool Grid::contains(const Point& p) const {
  for (int d = 0; d < dim; ++d) {
    if (p[d] < -half_width || p[d] > half_width) return false;
  }
  return true;
}

bool Grid::same_layout(const Grid& other) const {
  return dim == other.dim && nodes_per_axis == other.nodes_per_axis &&
         half_width == other.half_width;
}

Grid build_grid(int dim, double half_width, int nodes_per_axis) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " +
                                std::to_string(dim));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid half_width must be positive and finite");
  }
  if (nodes_per_axis < 9) {
    throw std::invalid_argument(
        "nodes_per_axis must be at least 9 (got " +
        std::to_string(nodes_per_axis) + "): coarser grids cannot support "
        "free-boundary analysis");
  }
  Grid g;
  g.dim = dim;
  g.half_width = half_width;
  g.nodes_per_axis = nodes_per_axis;
  g.spacing = 2.0 * half_width / static_cast<double>(nodes_per_axis - 1);
  return g;
}

ScalarField make_field(const Grid& grid, double fill) {
  ScalarField f;
  f.grid = grid;
  f.values.assign(grid.node_count(), fill);
  return f;
}

std::vector<std::size_t> ball_nodes(const Grid& grid, const Point& center,
                                    double radius, BallClosure closure) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  const int m = grid.nodes_per_axis;
  const double h = grid.spacing;
  const double H = grid.half_width;
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int d = 0; d < grid.dim; ++d) {
    lo[d] = std::max(0, static_cast<int>(
                            std::ceil((center[d] - radius + H) / h - 1e-9)));
    hi[d] = std::min(m - 1, static_cast<int>(std::floor(
                                (center[d] + radius + H) / h + 1e-9)));
    if (lo[d] > hi[d]) return {};
  }
  const double r2 = radius * radius;
  std::vector<std::size_t> out;
  std::array<int, 3> idx{0, 0, 0};
  // scan box is conservative; membership decided by the exact distance test
  for (idx[0] = lo[0]; idx[0] <= hi[0]; ++idx[0]) {
    for (idx[1] = lo[1]; idx[1] <= hi[1]; ++idx[1]) {
      for (idx[2] = lo[2]; idx[2] <= hi[2]; ++idx[2]) {
        double d2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
          const double t = grid.axis_coord(idx[d]) - center[d];
          d2 += t * t;
        }
        const bool in = (closure == BallClosure::open) ? (d2 < r2) : (d2 <= r2);
        if (in) out.push_back(grid.flatten(idx));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double measure(const Grid& grid, std::span<const std::size_t> nodes) {
  return static_cast<double>(nodes.size()) * grid.cell_volume();
}

double interpolate(const ScalarField& field, const Point& p) {
  const Grid& g = field.grid;
  const int m = g.nodes_per_axis;
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int d = 0; d < g.dim; ++d) {
    double u = (p[d] + g.half_width) / g.spacing;
    u = std::clamp(u, 0.0, static_cast<double>(m - 1));
    int i = static_cast<int>(std::floor(u));
    if (i > m - 2) i = m - 2;
    base[d] = i;
    frac[d] = u - static_cast<double>(i);
  }
  double acc = 0.0;
  const int corners = 1 << g.dim;
  for (int c = 0; c < corners; ++c) {
    double wgt = 1.0;
    std::array<int, 3> idx = base;
    for (int d = 0; d < g.dim; ++d) {
      if (c & (1 << d)) {
        idx[d] += 1;
        wgt *= frac[d];
      } else {
        wgt *= 1.0 - frac[d];
      }
    }
    if (wgt != 0.0) acc += wgt * field.values[g.flatten(idx)];
  }
  return acc;
}

std::string field_to_string(const ScalarField& field) {
  std::string out;
  out.reserve(field.values.size() * 20 + 64);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d %.17g %d\n", field.grid.dim,
                field.grid.spacing, field.grid.nodes_per_axis);
  out += buf;
  for (double v : field.values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out += buf;
  }
  return out;
}

ScalarField field_from_string(const std::string& text) {
  std::istringstream in(text);
  int dim = 0, m = 0;
  double h = 0.0;
  if (!(in >> dim >> h >> m)) {
    throw std::runtime_error("field header must be: dim spacing nodes_per_axis");
  }
  const double half_width = h * static_cast<double>(m - 1) / 2.0;
  Grid g = build_grid(dim, half_width, m);
  ScalarField f;
  f.grid = g;
  f.values.resize(g.node_count());
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!(in >> f.values[i])) {
      throw std::runtime_error("field body ended early: expected " +
                               std::to_string(f.values.size()) + " values");
    }
  }
  return f;
}

void write_field(const ScalarField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << field_to_string(field);
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return field_from_string(ss.str());
}

void write_field_csv(const ScalarField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const Grid& g = field.grid;
  for (int d = 0; d < g.dim; ++d) out << "x" << (d + 1) << ",";
  out << "value\n";
  char buf[64];
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Point p = g.coords(i);
    for (int d = 0; d < g.dim; ++d) {
      std::snprintf(buf, sizeof(buf), "%.17g,", p[d]);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", field.values[i]);
    out << buf;
  }
}

}  // namespace oblab
