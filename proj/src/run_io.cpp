#include "tesim/run_io.hpp"

#include <chrono>
#include <climits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tesim/balance.hpp"
#include "tesim/presets.hpp"
#include "tesim/snapshot.hpp"

namespace tesim {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string path_join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

std::string snapshot_name(int step, const std::string& field) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%08d_%s.bin", step, field.c_str());
  return buf;
}

RunArtifacts execute_run(const RunConfig& cfg, const std::string& out_dir) {
  RunArtifacts art;
  art.out_dir = out_dir.empty() ? cfg.output.out_dir : out_dir;
  if (art.out_dir.empty())
    throw ConfigError({"output.out_dir: no output directory given"});
  fs::create_directories(art.out_dir);

  const InitialData init = build_initial_data(cfg.initial, cfg.grid);

  std::ofstream ledger(path_join(art.out_dir, "ledger.csv"),
                       std::ios::binary);
  if (!ledger)
    throw std::runtime_error("cannot write " +
                             path_join(art.out_dir, "ledger.csv"));
  ledger << balance_csv_header() << "\n";

  RunSinks sinks;
  // Config stride 0 means "first and last only"; run() always emits those.
  sinks.ledger_stride =
      cfg.output.ledger_stride == 0 ? INT_MAX : cfg.output.ledger_stride;
  sinks.state_stride =
      cfg.output.snapshot_stride == 0 ? INT_MAX : cfg.output.snapshot_stride;
  sinks.store_states = false;
  sinks.on_ledger = [&](const BalanceRow& row) {
    ledger << balance_csv_line(row) << "\n";
  };
  sinks.on_state = [&](const SimState& s, int step) {
    write_snapshot(path_join(art.out_dir, snapshot_name(step, "u")), s.u, s.t);
    write_snapshot(path_join(art.out_dir, snapshot_name(step, "v")), s.v, s.t);
    write_snapshot(path_join(art.out_dir, snapshot_name(step, "theta")),
                   s.theta, s.t);
    art.snapshot_steps.push_back(step);
  };

  const auto t0 = std::chrono::steady_clock::now();
  art.result = run(init, cfg.solver, cfg.params, sinks);
  art.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ledger.close();

  const BalanceRow& last = art.result.ledger.back();
  ordered_json summary;
  summary["config"] = ordered_json::parse(config_to_json(cfg));
  ordered_json fin;
  fin["t"] = last.t;
  fin["steps"] = art.result.steps;
  fin["energy_residual"] = last.energy_residual;
  fin["dissipation_residual"] = last.dissipation_residual;
  fin["min_theta"] = last.min_theta;
  fin["max_theta"] = last.max_theta;
  fin["theta_min_overall"] = art.result.theta_min_overall;
  summary["final"] = fin;
  summary["snapshot_steps"] = art.snapshot_steps;
  summary["wall_seconds"] = art.wall_seconds;

  std::ofstream sum(path_join(art.out_dir, "summary.json"), std::ios::binary);
  if (!sum)
    throw std::runtime_error("cannot write " +
                             path_join(art.out_dir, "summary.json"));
  sum << summary.dump(2) << "\n";
  return art;
}

LoadedRun load_run(const std::string& dir) {
  std::ifstream in(path_join(dir, "summary.json"), std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path_join(dir, "summary.json"));
  ordered_json summary = ordered_json::parse(in);

  LoadedRun run;
  run.cfg = parse_config(summary.at("config").dump());

  for (const auto& step_j : summary.at("snapshot_steps")) {
    const int step = step_j.get<int>();
    SimState s;
    Snapshot su = read_snapshot(path_join(dir, snapshot_name(step, "u")));
    Snapshot sv = read_snapshot(path_join(dir, snapshot_name(step, "v")));
    Snapshot st = read_snapshot(path_join(dir, snapshot_name(step, "theta")));
    s.t = st.time;
    s.u = su.to_field(run.cfg.grid);
    s.v = sv.to_field(run.cfg.grid);
    s.theta = st.to_field(run.cfg.grid);
    run.states.push_back(std::move(s));
  }
  return run;
}

}  // namespace tesim
