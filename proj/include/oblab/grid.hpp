#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace oblab {

// Coordinates beyond the active dimension are zero.
using Point = std::array<double, 3>;

double distance(const Point& a, const Point& b, int dim);

enum class BallClosure { open, closed };

/// Uniform node-centered grid on the box [-half_width, half_width]^dim.
/// Node coordinates along an axis are x_i = -half_width + i*spacing with
/// spacing = 2*half_width/(nodes_per_axis-1); corners land on the box
/// boundary exactly.
struct Grid {
  int dim = 0;
  double half_width = 0.0;
  double spacing = 0.0;
  int nodes_per_axis = 0;

  std::size_t node_count() const;
  std::size_t flatten(const std::array<int, 3>& idx) const;
  std::array<int, 3> unflatten(std::size_t node) const;
  Point coords(std::size_t node) const;
  double axis_coord(int i) const;
  bool is_boundary(std::size_t node) const;
  bool is_interior(std::size_t node) const { return !is_boundary(node); }
  std::vector<bool> boundary_mask() const;
  double cell_volume() const;  // spacing^dim
  bool contains(const Point& p) const;
  bool same_layout(const Grid& other) const;
  /// Stride in the flat index for a +1 step along axis d.
  std::size_t stride(int d) const;
};

/// Throws std::invalid_argument for dim outside {1,2,3} or nodes_per_axis < 9.
Grid build_grid(int dim, double half_width, int nodes_per_axis);

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

ScalarField make_field(const Grid& grid, double fill = 0.0);

template <typename F>
ScalarField sample_field(const Grid& grid, F&& fn) {
  ScalarField out;
  out.grid = grid;
  out.values.resize(grid.node_count());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = fn(grid.coords(i));
  }
  return out;
}

/// Nodes with Euclidean distance < r (open) or <= r (closed) from center.
std::vector<std::size_t> ball_nodes(const Grid& grid, const Point& center,
                                    double radius,
                                    BallClosure closure = BallClosure::open);

/// Counting measure scaled by the cell volume: |set| = count * spacing^dim.
double measure(const Grid& grid, std::span<const std::size_t> nodes);

/// Multilinear interpolation; p is clamped to the box.
double interpolate(const ScalarField& field, const Point& p);

// Flat text format: header "dim spacing nodes_per_axis", then one value per
// line in lexicographic node order.
void write_field(const ScalarField& field, const std::string& path);
ScalarField read_field(const std::string& path);
std::string field_to_string(const ScalarField& field);
ScalarField field_from_string(const std::string& text);

/// CSV with one "x1[,x2[,x3]],value" row per node.
void write_field_csv(const ScalarField& field, const std::string& path);

}  // namespace oblab
