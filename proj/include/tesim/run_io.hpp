#pragma once

#include <string>
#include <vector>

#include "tesim/config.hpp"
#include "tesim/solver.hpp"

namespace tesim {

/// Result of a batch run together with what landed on disk.
struct RunArtifacts {
  RunResult result;
  std::string out_dir;
  std::vector<int> snapshot_steps;  // steps with snap_<step>_{u,v,theta}.bin
  double wall_seconds = 0.0;
};

/// Execute a configured run and write ledger.csv, field snapshots, and
/// summary.json into `out_dir` (falls back to cfg.output.out_dir).  The CSV
/// and snapshot bytes depend only on the configuration, never on wall time.
RunArtifacts execute_run(const RunConfig& cfg, const std::string& out_dir);

/// A run directory loaded back: configuration echo plus the snapshot states
/// in chronological order (timestamps restored bit-exactly).
struct LoadedRun {
  RunConfig cfg;
  std::vector<SimState> states;
};

LoadedRun load_run(const std::string& dir);

/// Snapshot file name for one field of one step, e.g. snap_00000012_theta.bin.
std::string snapshot_name(int step, const std::string& field);

}  // namespace tesim
