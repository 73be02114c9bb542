#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tesim/grid_ops.hpp"
#include "tesim/mms.hpp"
#include "tesim/presets.hpp"
#include "tesim/solver.hpp"

using namespace tesim;

namespace {
constexpr double kPi = std::numbers::pi;

SimState make_state(const Grid& g, double t = 0.0) {
  SimState s;
  s.t = t;
  s.u = Field::vector(g);
  s.v = Field::vector(g);
  s.theta = Field::scalar(g);
  for (auto& v : s.theta.values) v = 1.0;
  return s;
}

double state_distance(const SimState& a, const SimState& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.theta.values.size(); ++i)
    m = std::max(m, std::abs(a.theta.values[i] - b.theta.values[i]));
  for (size_t i = 0; i < a.u.values.size(); ++i) {
    m = std::max(m, std::abs(a.u.values[i] - b.u.values[i]));
    m = std::max(m, std::abs(a.v.values[i] - b.v.values[i]));
  }
  return m;
}
}  // namespace

TEST_CASE("equilibrium is a fixed point of the coupled step") {
  const auto p = make_params(Model::LinearCV, 0.7, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  SimState s = make_state(g);
  SolverConfig cfg;
  cfg.dt = 1e-2;

  for (Coupling c : {Coupling::Splitting, Coupling::Picard}) {
    cfg.coupling = c;
    const SimState next = coupled_step(s, cfg, p);
    CHECK(state_distance(next, s) <= 1e-12);
  }
}

TEST_CASE("heat flow matches the analytic cosine decay") {
  // With negligible mechanical coupling the linear model reduces to the
  // Neumann heat equation; theta = 1 + a*cos(pi x)*exp(-pi^2 t).
  const auto p = make_params(Model::LinearCV, 1e-12, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  InitialData init;
  init.u0 = Field::vector(g);
  init.v0 = Field::vector(g);
  init.theta0 = Field::scalar(g);
  for (int i = 0; i < 65; ++i)
    init.theta0.at(i) = 1.0 + 0.2 * std::cos(kPi * i * g.spacing(0));

  SolverConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 0.05;
  RunSinks sinks;
  sinks.store_states = false;
  sinks.ledger_stride = 1 << 30;
  sinks.state_stride = 1 << 30;
  const RunResult res = run(init, cfg, p, sinks);

  double worst = 0.0;
  const double decay = std::exp(-kPi * kPi * cfg.t_end);
  for (int i = 0; i < 65; ++i) {
    const double exact = 1.0 + 0.2 * std::cos(kPi * i * g.spacing(0)) * decay;
    worst = std::max(worst, std::abs(res.final_state.theta.at(i) - exact));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("picard and splitting agree to second order over one step") {
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  SimState s = make_state(g);
  for (int i = 0; i < 33; ++i) {
    const double x = i * g.spacing(0);
    s.u.at(i) = 0.1 * std::sin(kPi * x);
    s.v.at(i) = 0.05 * std::sin(2 * kPi * x);
    s.theta.at(i) = 1.0 + 0.1 * std::cos(kPi * x);
  }

  auto gap = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.coupling = Coupling::Splitting;
    const SimState a = coupled_step(s, cfg, p);
    cfg.coupling = Coupling::Picard;
    const SimState b = coupled_step(s, cfg, p);
    return state_distance(a, b);
  };

  const double d1 = gap(4e-3);
  const double d2 = gap(2e-3);
  CHECK(d1 > 0.0);
  CHECK(d1 / d2 > 3.0);  // per-step difference shrinks like dt^2
  CHECK(d1 / d2 < 5.5);
}

TEST_CASE("temperature stays positive under a violent quench") {
  // Strong compression in a delta-free linear run: positivity must be
  // enforced by the solver rather than by luck.
  const auto p = make_params(Model::LinearCV, 2.0, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  InitialSpec spec;
  spec.preset = InitialPreset::StandingWave;
  spec.amplitude = 0.5;
  spec.theta_base = 0.05;
  const InitialData init = build_initial_data(spec, g);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.3;
  RunSinks sinks;
  sinks.store_states = false;
  const RunResult res = run(init, cfg, p, sinks);
  CHECK(res.theta_min_overall > 0.0);
}

TEST_CASE("log-temperature formulation rejects unsupported parameters") {
  const Grid g = Grid::line(1.0, 17);
  const SimState s = make_state(g);
  SolverConfig cfg;
  const auto power = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  CHECK_THROWS_AS(heat_step_log(s, s.u, 1e-3, power, cfg),
                  std::invalid_argument);
  auto lin = make_params(Model::LinearCV, 1.0, 2.0, 2.0, 0.5);  // delta != 0
  CHECK_THROWS_AS(heat_step_log(s, s.u, 1e-3, lin, cfg),
                  std::invalid_argument);
}

TEST_CASE("temperature and log-temperature updates converge to each other") {
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  InitialSpec spec;
  spec.preset = InitialPreset::StandingWave;
  spec.amplitude = 0.1;
  const InitialData init = build_initial_data(spec, g);

  auto final_gap = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.1;
    RunSinks sinks;
    sinks.store_states = false;
    cfg.heat_formulation = HeatForm::Temperature;
    const Field a = run(init, cfg, p, sinks).final_state.theta;
    cfg.heat_formulation = HeatForm::LogTemperature;
    const Field b = run(init, cfg, p, sinks).final_state.theta;
    double m = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i)
      m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
  };

  const double d1 = final_gap(4e-3);
  const double d2 = final_gap(2e-3);
  CHECK(d1 > 0.0);
  CHECK(d2 < 0.75 * d1);  // first-order cross-formulation agreement
}

TEST_CASE("zero horizon: no steps, initial ledger row only") {
  const auto p = make_params(Model::LinearCV, 1.0, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 17);
  InitialSpec spec;
  const InitialData init = build_initial_data(spec, g);
  SolverConfig cfg;
  cfg.t_end = 0.0;
  const RunResult res = run(init, cfg, p);
  CHECK(res.steps == 0);
  CHECK(res.ledger.size() == 1);
  CHECK(res.ledger.front().t == 0.0);
  CHECK(res.states.size() == 1);
}

TEST_CASE("identical configurations give bit-identical trajectories") {
  const auto p = make_params(Model::PowerLaw, 0.3, 2.0, 2.0, 1e-3);
  const Grid g = Grid::line(1.0, 33);
  InitialSpec spec;
  spec.preset = InitialPreset::GaussianHotSpot;
  spec.amplitude = 0.8;
  const InitialData init = build_initial_data(spec, g);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  const RunResult r1 = run(init, cfg, p);
  const RunResult r2 = run(init, cfg, p);
  CHECK(r1.final_state.theta.values == r2.final_state.theta.values);
  CHECK(r1.final_state.u.values == r2.final_state.u.values);
  CHECK(r1.final_state.v.values == r2.final_state.v.values);
}

TEST_CASE("manufactured constant solution is reproduced to solver tolerance") {
  const auto p = make_params(Model::PowerLaw, 0.5, 2.0, 2.0, 1e-2);
  const ManufacturedCase mc = constant_manufactured(p, 1.4);
  const Grid g = Grid::line(1.0, 17);
  InitialData init;
  init.u0 = Field::vector(g);
  init.v0 = Field::vector(g);
  init.theta0 = Field::scalar(g);
  for (auto& v : init.theta0.values) v = 1.4;

  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.1;
  RunSinks sinks;
  sinks.store_states = false;
  const RunResult res = run(init, cfg, p, sinks, &mc.forcing);
  double worst = 0.0;
  for (double th : res.final_state.theta.values)
    worst = std::max(worst, std::abs(th - 1.4));
  CHECK(worst < 1e-9);
  CHECK(max_abs(res.final_state.u) < 1e-12);
}

TEST_CASE("newton failure surfaces as a typed error") {
  // An absurd time step with a strong source makes the implicit update lose
  // positivity or diverge; either way a SolverError must come out.
  const auto p = make_params(Model::PowerLaw, 5.0, 2.0, 2.0, 50.0);
  const Grid g = Grid::line(1.0, 17);
  InitialSpec spec;
  spec.preset = InitialPreset::GaussianHotSpot;
  spec.amplitude = 50.0;
  spec.theta_base = 1e-3;
  const InitialData init = build_initial_data(spec, g);
  SolverConfig cfg;
  cfg.dt = 100.0;
  cfg.t_end = 100.0;
  cfg.newton_max_iters = 4;
  CHECK_THROWS_AS(run(init, cfg, p), SolverError);
}
