#include "tesim/grid.hpp"

#include <sstream>

namespace tesim {

Grid Grid::line(double extent, int nodes) {
  Grid g;
  g.dim = 1;
  g.cells = {nodes, 1};
  g.extents = {extent, 0.0};
  g.validate();
  return g;
}

Grid Grid::rectangle(double extent_x, double extent_y, int nodes_x,
                     int nodes_y) {
  Grid g;
  g.dim = 2;
  g.cells = {nodes_x, nodes_y};
  g.extents = {extent_x, extent_y};
  g.validate();
  return g;
}

void Grid::validate() const {
  std::ostringstream bad;
  if (dim != 1 && dim != 2) bad << " [dim: must be 1 or 2]";
  for (int a = 0; a < dim; ++a) {
    if (cells[a] < 3) bad << " [cells[" << a << "]: must be >= 3]";
    if (!(extents[a] > 0.0)) bad << " [extents[" << a << "]: must be > 0]";
  }
  const auto msg = bad.str();
  if (!msg.empty()) throw std::invalid_argument("invalid grid:" + msg);
}

double Grid::weight(int ix, int iy) const {
  double w = spacing(0) * ((ix == 0 || ix == cells[0] - 1) ? 0.5 : 1.0);
  if (dim == 2)
    w *= spacing(1) * ((iy == 0 || iy == cells[1] - 1) ? 0.5 : 1.0);
  return w;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid == b.grid)) {
    throw std::invalid_argument(std::string(where) +
                                ": fields live on different grids");
  }
}

}  // namespace tesim
