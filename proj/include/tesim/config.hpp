#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tesim/constitutive.hpp"
#include "tesim/grid.hpp"
#include "tesim/solver.hpp"

namespace tesim {

/// Initial-condition presets.  All of them produce positive temperatures by
/// construction (a positive base plus nonnegative bumps) and displacements /
/// velocities that vanish on the boundary.
enum class InitialPreset { Equilibrium, GaussianHotSpot, StandingWave,
                           TwoScale };

struct InitialSpec {
  InitialPreset preset = InitialPreset::Equilibrium;
  double theta_base = 1.0;
  double amplitude = 0.0;   // bump height (theta) or displacement amplitude
  double amplitude2 = 0.0;  // second-scale bump height (TwoScale)
  double width = 0.125;     // Gaussian width as a fraction of the extent
  double center = 0.5;      // Gaussian center as a fraction of the extent
  int mode1 = 1;            // TwoScale low-frequency mode index
  int mode2 = 8;            // TwoScale high-frequency mode index
  // Optional snapshot files; a nonempty path overrides the preset for that
  // field.  Snapshots must match the configured grid.
  std::string u_path;
  std::string v_path;
  std::string theta_path;
};

struct OutputSpec {
  std::string out_dir;      // may be overridden by --out on the command line
  int ledger_stride = 1;    // 0: first and last rows only
  int snapshot_stride = 0;  // 0: first and last snapshots only
};

struct RunConfig {
  ConstitutiveParams params;
  Grid grid;
  InitialSpec initial;
  SolverConfig solver;
  OutputSpec output;
  std::optional<uint64_t> seed;  // synthetic fields only; never solver math
};

/// Configuration rejection: carries every violation, each prefixed with the
/// JSON path of the offending field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> problems);
  std::vector<std::string> problems;
};

/// Parse and validate a JSON run configuration.  Reports all violations
/// (unknown keys, bad types, out-of-range values) in one ConfigError rather
/// than stopping at the first; duplicate keys are rejected at parse time.
RunConfig parse_config(const std::string& json_text);

RunConfig load_config_file(const std::string& path);

/// Serialize back to JSON (used to echo the configuration into summaries).
std::string config_to_json(const RunConfig& cfg);

}  // namespace tesim
