#include "tesim/presets.hpp"

#include <cmath>
#include <numbers>

#include "tesim/snapshot.hpp"

namespace tesim {
namespace {

constexpr double kPi = std::numbers::pi;

/// exp(-sum_a ((x_a - c*L_a) / (w*L_a))^2), in [0, 1].
double gaussian_bump(const Grid& g, int ix, int iy, double center,
                     double width) {
  double arg = 0.0;
  const double x = ix * g.spacing(0);
  const double rx = (x - center * g.extents[0]) / (width * g.extents[0]);
  arg += rx * rx;
  if (g.dim == 2) {
    const double y = iy * g.spacing(1);
    const double ry = (y - center * g.extents[1]) / (width * g.extents[1]);
    arg += ry * ry;
  }
  return std::exp(-arg);
}

/// Product over axes of (1 - cos(2 pi k x / L)) / 2, in [0, 1].
double cosine_bump(const Grid& g, int ix, int iy, int mode) {
  const double x = ix * g.spacing(0);
  double b = 0.5 * (1.0 - std::cos(2.0 * kPi * mode * x / g.extents[0]));
  if (g.dim == 2) {
    const double y = iy * g.spacing(1);
    b *= 0.5 * (1.0 - std::cos(2.0 * kPi * mode * y / g.extents[1]));
  }
  return b;
}

/// sin(pi x / L) (times sin(pi y / L) in 2D): vanishes on the boundary.
/// Boundary nodes are pinned to exactly zero; sin(pi) evaluates to ~1e-16,
/// which the initial-data validator rightly rejects.
double sine_mode(const Grid& g, int ix, int iy) {
  if (ix == 0 || ix == g.cells[0] - 1) return 0.0;
  if (g.dim == 2 && (iy == 0 || iy == g.cells[1] - 1)) return 0.0;
  const double x = ix * g.spacing(0);
  double s = std::sin(kPi * x / g.extents[0]);
  if (g.dim == 2) {
    const double y = iy * g.spacing(1);
    s *= std::sin(kPi * y / g.extents[1]);
  }
  return s;
}

Field load_snapshot_field(const std::string& path, const Grid& grid,
                          int components) {
  Snapshot snap = read_snapshot(path);
  Field f = snap.to_field(grid);
  if (f.components != components)
    throw std::runtime_error(path + ": expected " +
                             std::to_string(components) +
                             " component(s), got " +
                             std::to_string(f.components));
  return f;
}

}  // namespace

InitialData build_initial_data(const InitialSpec& spec, const Grid& grid) {
  InitialData init;
  init.u0 = Field::vector(grid);
  init.v0 = Field::vector(grid);
  init.theta0 = Field::scalar(grid);

  const int nx = grid.cells[0];
  const int ny = grid.dim == 2 ? grid.cells[1] : 1;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int node = grid.index(ix, iy);
      double theta = spec.theta_base;
      switch (spec.preset) {
        case InitialPreset::Equilibrium:
          break;
        case InitialPreset::GaussianHotSpot:
          theta += spec.amplitude *
                   gaussian_bump(grid, ix, iy, spec.center, spec.width);
          break;
        case InitialPreset::StandingWave:
          init.u0.at(node, 0) = spec.amplitude * sine_mode(grid, ix, iy);
          break;
        case InitialPreset::TwoScale:
          theta += spec.amplitude * cosine_bump(grid, ix, iy, spec.mode1) +
                   spec.amplitude2 * cosine_bump(grid, ix, iy, spec.mode2);
          break;
      }
      init.theta0.at(node) = theta;
    }
  }

  if (!spec.u_path.empty())
    init.u0 = load_snapshot_field(spec.u_path, grid, grid.dim);
  if (!spec.v_path.empty())
    init.v0 = load_snapshot_field(spec.v_path, grid, grid.dim);
  if (!spec.theta_path.empty())
    init.theta0 = load_snapshot_field(spec.theta_path, grid, 1);

  init.validate();
  return init;
}

}  // namespace tesim
