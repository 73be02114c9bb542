#include "tesim/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tesim {

namespace {

void require_scalar(const Field& f, const char* where) {
  if (f.components != 1)
    throw std::invalid_argument(std::string(where) +
                                ": expected a scalar field");
}

// Description of the 1D lines that make up one axis of the tensor grid.
struct AxisLines {
  int n;        // nodes along the axis
  int stride;   // node-index stride along the axis
  int lines;    // number of parallel lines
  int lstride;  // node-index stride between lines
  double h;     // spacing
};

AxisLines axis_lines(const Grid& g, int axis) {
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  if (axis == 0) return {nx, 1, ny, nx, g.spacing(0)};
  return {ny, nx, nx, 1, g.spacing(1)};
}

}  // namespace

Field gradient(const Field& f) {
  require_scalar(f, "gradient");
  Field out(f.grid, f.grid.dim);
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    const AxisLines ax = axis_lines(f.grid, axis);
    for (int l = 0; l < ax.lines; ++l) {
      const int base = l * ax.lstride;
      auto v = [&](int i) { return f.at(base + i * ax.stride); };
      out.at(base, axis) = (v(1) - v(0)) / ax.h;
      for (int i = 1; i < ax.n - 1; ++i)
        out.at(base + i * ax.stride, axis) = (v(i + 1) - v(i - 1)) / (2 * ax.h);
      out.at(base + (ax.n - 1) * ax.stride, axis) =
          (v(ax.n - 1) - v(ax.n - 2)) / ax.h;
    }
  }
  return out;
}

Field divergence(const Field& g) {
  if (g.components != g.grid.dim)
    throw std::invalid_argument("divergence: expected a vector field");
  Field out = Field::scalar(g.grid);
  for (int axis = 0; axis < g.grid.dim; ++axis) {
    const AxisLines ax = axis_lines(g.grid, axis);
    for (int l = 0; l < ax.lines; ++l) {
      const int base = l * ax.lstride;
      auto v = [&](int i) { return g.at(base + i * ax.stride, axis); };
      out.at(base) += (v(1) - v(0)) / ax.h;
      for (int i = 1; i < ax.n - 1; ++i)
        out.at(base + i * ax.stride) += (v(i + 1) - v(i - 1)) / (2 * ax.h);
      out.at(base + (ax.n - 1) * ax.stride) +=
          (v(ax.n - 1) - v(ax.n - 2)) / ax.h;
    }
  }
  return out;
}

Field laplacian_dirichlet(const Field& f) {
  Field out(f.grid, f.components);
  const Grid& g = f.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
  const double ihy2 = g.dim == 2 ? 1.0 / (g.spacing(1) * g.spacing(1)) : 0.0;
  for (int c = 0; c < f.components; ++c) {
    for (int iy = 0; iy < ny; ++iy) {
      const bool ybnd = g.dim == 2 && (iy == 0 || iy == ny - 1);
      for (int ix = 0; ix < nx; ++ix) {
        if (ybnd || ix == 0 || ix == nx - 1) continue;  // boundary row -> 0
        const int n = g.index(ix, iy);
        double acc = (f.at(n + 1, c) - 2 * f.at(n, c) + f.at(n - 1, c)) * ihx2;
        if (g.dim == 2)
          acc +=
              (f.at(n + nx, c) - 2 * f.at(n, c) + f.at(n - nx, c)) * ihy2;
        out.at(n, c) = acc;
      }
    }
  }
  return out;
}

Field laplacian_neumann(const Field& f) {
  require_scalar(f, "laplacian_neumann");
  Field out = Field::scalar(f.grid);
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    const AxisLines ax = axis_lines(f.grid, axis);
    const double ih2 = 1.0 / (ax.h * ax.h);
    for (int l = 0; l < ax.lines; ++l) {
      const int base = l * ax.lstride;
      auto v = [&](int i) { return f.at(base + i * ax.stride); };
      out.at(base) += 2 * (v(1) - v(0)) * ih2;  // mirror ghost
      for (int i = 1; i < ax.n - 1; ++i)
        out.at(base + i * ax.stride) += (v(i + 1) - 2 * v(i) + v(i - 1)) * ih2;
      out.at(base + (ax.n - 1) * ax.stride) +=
          2 * (v(ax.n - 2) - v(ax.n - 1)) * ih2;
    }
  }
  return out;
}

Field variable_coefficient_diffusion(const Field& kappa, const Field& theta) {
  require_scalar(kappa, "variable_coefficient_diffusion");
  require_scalar(theta, "variable_coefficient_diffusion");
  require_same_grid(kappa, theta, "variable_coefficient_diffusion");
  Field out = Field::scalar(theta.grid);
  for (int axis = 0; axis < theta.grid.dim; ++axis) {
    const AxisLines ax = axis_lines(theta.grid, axis);
    const double ih2 = 1.0 / (ax.h * ax.h);
    for (int l = 0; l < ax.lines; ++l) {
      const int base = l * ax.lstride;
      auto t = [&](int i) { return theta.at(base + i * ax.stride); };
      auto k = [&](int i) { return kappa.at(base + i * ax.stride); };
      // face flux scaled by 1/h^2: kappa_{i+1/2} * (t_{i+1} - t_i)
      auto flux = [&](int i) {
        return 0.5 * (k(i) + k(i + 1)) * (t(i + 1) - t(i));
      };
      // Mirror ghosts make the boundary flux difference twice the first
      // interior face flux.
      out.at(base) += 2 * flux(0) * ih2;
      for (int i = 1; i < ax.n - 1; ++i)
        out.at(base + i * ax.stride) += (flux(i) - flux(i - 1)) * ih2;
      out.at(base + (ax.n - 1) * ax.stride) += -2 * flux(ax.n - 2) * ih2;
    }
  }
  return out;
}

double integrate(const Field& f) {
  require_scalar(f, "integrate");
  const Grid& g = f.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      acc += g.weight(ix, iy) * f.at(g.index(ix, iy));
  return acc;
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a, b, "inner");
  if (a.components != b.components)
    throw std::invalid_argument("inner: component counts differ");
  const Grid& g = a.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int n = g.index(ix, iy);
      double dot = 0.0;
      for (int c = 0; c < a.components; ++c) dot += a.at(n, c) * b.at(n, c);
      acc += g.weight(ix, iy) * dot;
    }
  return acc;
}

double elastic_energy(const Field& u) {
  const Grid& g = u.grid;
  double acc = 0.0;
  for (int axis = 0; axis < g.dim; ++axis) {
    const AxisLines ax = axis_lines(g, axis);
    for (int l = 0; l < ax.lines; ++l) {
      // Transverse trapezoid weight of this line (1 in 1D).
      double wt = 1.0;
      if (g.dim == 2) {
        const AxisLines tr = axis_lines(g, 1 - axis);
        wt = tr.h * ((l == 0 || l == ax.lines - 1) ? 0.5 : 1.0);
      }
      const int base = l * ax.lstride;
      for (int c = 0; c < u.components; ++c) {
        double line = 0.0;
        for (int i = 0; i + 1 < ax.n; ++i) {
          const double d = u.at(base + (i + 1) * ax.stride, c) -
                           u.at(base + i * ax.stride, c);
          line += d * d;
        }
        acc += wt * line / ax.h;
      }
    }
  }
  return 0.5 * acc;
}

double field_min(const Field& f) {
  return *std::min_element(f.values.begin(), f.values.end());
}

double field_max(const Field& f) {
  return *std::max_element(f.values.begin(), f.values.end());
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double weighted_l1(const Field& f) {
  const Grid& g = f.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int n = g.index(ix, iy);
      double dot = 0.0;
      for (int c = 0; c < f.components; ++c) dot += std::abs(f.at(n, c));
      acc += g.weight(ix, iy) * dot;
    }
  return acc;
}

}  // namespace tesim
