#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tesim/config.hpp"
#include "tesim/mms.hpp"
#include "tesim/relative_entropy.hpp"
#include "tesim/run_io.hpp"
#include "tesim/solver.hpp"
#include "tesim/verify.hpp"

namespace {

// Exit codes: 0 success, 1 invariant failure, 2 configuration error,
// 3 numerical failure.
constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            int stride) {
  tesim::RunConfig cfg = tesim::load_config_file(config_path);
  if (stride > 0) cfg.output.ledger_stride = stride;
  const tesim::RunArtifacts art = tesim::execute_run(cfg, out_dir);
  const tesim::BalanceRow& last = art.result.ledger.back();
  std::printf("run finished: t=%g steps=%d\n", last.t, art.result.steps);
  std::printf("  energy residual      % .6e\n", last.energy_residual);
  std::printf("  dissipation residual % .6e\n", last.dissipation_residual);
  std::printf("  theta range (final)  [%.6g, %.6g], overall min %.6g\n",
              last.min_theta, last.max_theta, art.result.theta_min_overall);
  std::printf("  wrote %s/{ledger.csv, summary.json} and %zu snapshot set(s)"
              " in %.2fs\n",
              art.out_dir.c_str(), art.snapshot_steps.size(),
              art.wall_seconds);
  return kOk;
}

int cmd_verify(const std::string& suite) {
  std::vector<std::string> suites;
  if (suite == "all")
    suites = tesim::verify_suite_names();
  else
    suites.push_back(suite);
  bool ok = true;
  for (const auto& name : suites) {
    const tesim::SuiteReport rep = tesim::run_verify_suite(name);
    std::cout << rep.table();
    ok = ok && rep.all_pass();
  }
  return ok ? kOk : kInvariantFailure;
}

int cmd_compare(const std::string& ref_dir, const std::string& run_dir,
                const std::string& out_dir) {
  const tesim::LoadedRun ref = tesim::load_run(ref_dir);
  const tesim::LoadedRun other = tesim::load_run(run_dir);

  const auto& rp = ref.cfg.params;
  const auto& op = other.cfg.params;
  if (rp.model != op.model || rp.mu != op.mu || rp.alpha != op.alpha ||
      rp.beta != op.beta || rp.delta != op.delta)
    throw tesim::ConfigError(
        {"compare: the two runs use different model parameters"});
  if (ref.states.size() != other.states.size())
    throw tesim::ConfigError(
        {"compare: runs have different snapshot counts (" +
         std::to_string(ref.states.size()) + " vs " +
         std::to_string(other.states.size()) + ")"});
  for (size_t k = 0; k < ref.states.size(); ++k)
    if (std::abs(ref.states[k].t - other.states[k].t) > 1e-12)
      throw tesim::ConfigError({"compare: snapshot timestamps differ"});

  const tesim::RelEntReport rep =
      tesim::weak_strong_compare(other.states, ref.states, rp);

  std::printf("%12s %14s %14s %14s %14s\n", "t", "thermal", "velocity",
              "strain", "total");
  for (size_t k = 0; k < rep.t.size(); ++k)
    std::printf("%12.6g %14.6e %14.6e %14.6e %14.6e\n", rep.t[k],
                rep.thermal_gap[k], rep.velocity_gap[k], rep.strain_gap[k],
                rep.total[k]);
  std::printf("fitted growth rate C = %.6g (reference scale %.6g)\n",
              rep.fitted_C, rep.c_ref);
  if (!rep.note.empty()) std::printf("note: %s\n", rep.note.c_str());
  std::printf("verdict: %s\n", rep.pass ? "pass" : "fail");

  if (!out_dir.empty()) {
    nlohmann::ordered_json j;
    j["t"] = rep.t;
    j["thermal_gap"] = rep.thermal_gap;
    j["velocity_gap"] = rep.velocity_gap;
    j["strain_gap"] = rep.strain_gap;
    j["total"] = rep.total;
    j["fitted_C"] = rep.fitted_C;
    j["c_ref"] = rep.c_ref;
    j["pass"] = rep.pass;
    j["proven_regime"] = rep.proven_regime;
    j["note"] = rep.note;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/compare_report.json", std::ios::binary);
    out << j.dump(2) << "\n";
  }
  return rep.pass ? kOk : kInvariantFailure;
}

int cmd_mms(int refinements) {
  tesim::MmsConfig cfg;
  const tesim::MmsReport spatial =
      tesim::run_mms(cfg, tesim::MmsStudy::Spatial, refinements);
  const tesim::MmsReport temporal =
      tesim::run_mms(cfg, tesim::MmsStudy::Temporal, refinements);
  std::cout << spatial.table() << "\n" << temporal.table();
  const bool ok = spatial.finest_order_u() >= 1.9 &&
                  spatial.finest_order_theta() >= 1.9 &&
                  temporal.finest_order_u() >= 0.9 &&
                  temporal.finest_order_theta() >= 0.9;
  std::printf("\nobserved orders: spatial (u %.3f, theta %.3f)"
              " temporal (u %.3f, theta %.3f) -> %s\n",
              spatial.finest_order_u(), spatial.finest_order_theta(),
              temporal.finest_order_u(), temporal.finest_order_theta(),
              ok ? "pass" : "fail");
  return ok ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermoelastic wave/heat simulator and verification harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir, ref_dir, run_dir, suite;
  int stride = 0;
  int refinements = 4;

  CLI::App* run = app.add_subcommand("run", "execute a configured simulation");
  run->add_option("--config", config_path, "JSON configuration file")
      ->required();
  run->add_option("--out", out_dir,
                  "output directory (default: output.out_dir from config)");
  run->add_option("--stride", stride,
                  "override the ledger row stride from the config");

  CLI::App* verify =
      app.add_subcommand("verify", "run a named invariant suite");
  verify
      ->add_option("--suite", suite,
                   "constitutive | operators | balances | relent | all")
      ->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "relative-entropy distance between two finished runs");
  compare->add_option("--ref", ref_dir, "reference (strong) run directory")
      ->required();
  compare->add_option("run_dir", run_dir, "run directory to compare")
      ->required();
  compare->add_option("--out", out_dir,
                      "directory for compare_report.json (optional)");

  CLI::App* mms = app.add_subcommand(
      "mms", "manufactured-solution convergence studies");
  mms->add_option("--refinements", refinements,
                  "number of refinement levels (>= 3)")
      ->check(CLI::Range(3, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, stride);
    if (verify->parsed()) return cmd_verify(suite);
    if (compare->parsed()) return cmd_compare(ref_dir, run_dir, out_dir);
    if (mms->parsed()) return cmd_mms(refinements);
  } catch (const tesim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const tesim::SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kConfigError;  // unreachable: a subcommand is required
}
