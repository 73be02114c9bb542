#pragma once

#include "tesim/config.hpp"
#include "tesim/grid.hpp"
#include "tesim/solver.hpp"

namespace tesim {

/// Realize an initial-condition spec on a grid.  Presets keep displacement
/// and velocity zero on the boundary and the temperature strictly positive
/// (positive base plus nonnegative bumps); snapshot overrides are loaded
/// and checked against the grid.
InitialData build_initial_data(const InitialSpec& spec, const Grid& grid);

}  // namespace tesim
