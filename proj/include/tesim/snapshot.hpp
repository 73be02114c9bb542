#pragma once

#include <array>
#include <string>
#include <vector>

#include "tesim/grid.hpp"

namespace tesim {

/// On-disk snapshot: one ASCII header line
///   TESIM1 <dim> <cells per axis ...> <components> <time>\n
/// followed by the node-ordered field values as raw little-endian binary
/// 64-bit floats.  Write/read round-trips are bit-exact.
struct Snapshot {
  int dim = 1;
  std::array<int, 2> cells = {0, 0};
  int components = 1;
  double time = 0.0;
  std::vector<double> values;

  /// Attach the values to `grid` (throws if shape does not match).
  Field to_field(const Grid& grid) const;
};

void write_snapshot(const std::string& path, const Field& field, double time);

Snapshot read_snapshot(const std::string& path);

}  // namespace tesim
