#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tesim {

/// Uniform tensor-product grid on an interval (dim=1) or rectangle (dim=2).
///
/// `cells[a]` is the number of grid NODES along axis a (>= 3); the mesh
/// spacing is extents[a] / (cells[a] - 1).  Nodes are ordered row-major with
/// the x index fastest: node = iy * cells[0] + ix.
struct Grid {
  int dim = 1;
  std::array<int, 2> cells = {3, 1};        // node counts per axis
  std::array<double, 2> extents = {1.0, 0.0};

  static Grid line(double extent, int nodes);
  static Grid rectangle(double extent_x, double extent_y, int nodes_x,
                        int nodes_y);

  void validate() const;

  double spacing(int axis) const { return extents[axis] / (cells[axis] - 1); }
  int node_count() const { return dim == 1 ? cells[0] : cells[0] * cells[1]; }
  int index(int ix, int iy = 0) const { return iy * cells[0] + ix; }

  /// Trapezoid quadrature weight of a node (product over axes of h or h/2).
  double weight(int ix, int iy = 0) const;

  /// Total measure of the domain.
  double measure() const {
    return dim == 1 ? extents[0] : extents[0] * extents[1];
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && cells == o.cells && extents == o.extents;
  }
};

/// Nodal field with `components` values per node, stored node-ordered
/// (value of component c at node n lives at values[n*components + c]).
struct Field {
  Grid grid;
  int components = 1;
  std::vector<double> values;

  Field() = default;
  Field(const Grid& g, int comps)
      : grid(g),
        components(comps),
        values(static_cast<size_t>(g.node_count()) * comps, 0.0) {
    if (comps < 1 || comps > 2)
      throw std::invalid_argument("Field: components must be 1 or 2");
  }

  static Field scalar(const Grid& g) { return Field(g, 1); }
  static Field vector(const Grid& g) { return Field(g, g.dim); }

  double& at(int node, int comp = 0) {
    return values[static_cast<size_t>(node) * components + comp];
  }
  double at(int node, int comp = 0) const {
    return values[static_cast<size_t>(node) * components + comp];
  }

  size_t size() const { return values.size(); }
};

/// Throw std::invalid_argument unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* where);

}  // namespace tesim
