#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tesim/grid_ops.hpp"
#include "tesim/presets.hpp"
#include "tesim/relative_entropy.hpp"
#include "tesim/solver.hpp"

using namespace tesim;

namespace {
constexpr double kPi = std::numbers::pi;

SimState rest_state(const Grid& g, double theta_flat) {
  SimState s;
  s.u = Field::vector(g);
  s.v = Field::vector(g);
  s.theta = Field::scalar(g);
  for (auto& v : s.theta.values) v = theta_flat;
  return s;
}
}  // namespace

TEST_CASE("density values match closed forms") {
  const auto lin = make_params(Model::LinearCV, 1.0, 2.0, 2.0);

  // LinearCV: E(theta|Theta) = theta - Theta - Theta*ln(theta/Theta).
  CHECK(rel_entropy_density_nonlinear(lin, 1.2, 1.0) ==
        doctest::Approx(0.017678443206045374).epsilon(1e-14));
  // Same density through the log-variable entry point.
  CHECK(rel_entropy_density_linear(std::log(0.7), 1.0) ==
        doctest::Approx(0.056674943938732379).epsilon(1e-14));
  CHECK(rel_entropy_density_linear(std::log(1.2), 1.0) ==
        doctest::Approx(0.017678443206045374).epsilon(1e-13));

  // PowerLaw alpha=2: E(theta|1) = theta^2 - theta - ln(theta).
  const auto pow2 = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  for (double th : {0.5, 0.9, 1.7, 3.0})
    CHECK(rel_entropy_density_nonlinear(pow2, th, 1.0) ==
          doctest::Approx(th * th - th - std::log(th)).epsilon(1e-13));
}

TEST_CASE("density is nonnegative and vanishes only on the diagonal") {
  for (Model m : {Model::LinearCV, Model::PowerLaw}) {
    const auto p = make_params(m, 1.0, 2.5, 1.5);
    for (double Theta : {0.3, 1.0, 2.7}) {
      CHECK(rel_entropy_density_nonlinear(p, Theta, Theta) ==
            doctest::Approx(0.0).epsilon(1e-14));
      for (double th : {0.05, 0.4, 0.99, 1.01, 2.0, 9.0}) {
        const double e = rel_entropy_density_nonlinear(p, th, Theta);
        if (th != Theta) CHECK(e > 0.0);
      }
    }
  }
  const auto lin = make_params(Model::LinearCV, 1.0, 2.0, 2.0);
  CHECK_THROWS_AS(rel_entropy_density_nonlinear(lin, -1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS(rel_entropy_density_nonlinear(lin, 1.0, 0.0),
                  std::domain_error);
}

TEST_CASE("quadratic ratio limit matches the curvature formula") {
  const auto lin = make_params(Model::LinearCV, 1.0, 2.0, 2.0);
  CHECK(quadratic_ratio_limit(lin, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  // LinearCV general Theta: e1'' = 0, s1'' = -1/Theta^2 -> limit 2*Theta.
  for (double Theta : {0.25, 0.5, 3.0})
    CHECK(quadratic_ratio_limit(lin, Theta) ==
          doctest::Approx(2.0 * Theta).epsilon(1e-13));

  const auto pow2 = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  CHECK(quadratic_ratio_limit(pow2, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // Finite-difference cross-check: E(theta|Theta) ~ |theta-Theta|^2 / limit.
  const auto frac = make_params(Model::PowerLaw, 1.0, 1.8, 1.0);
  const double Theta = 1.3;
  const double eps = 1e-5 * Theta;
  const double ent = rel_entropy_density_nonlinear(frac, Theta + eps, Theta);
  CHECK(eps * eps / ent ==
        doctest::Approx(quadratic_ratio_limit(frac, Theta)).epsilon(1e-4));
}

TEST_CASE("quadratic control constants on the reference bracket") {
  // Theta pinned to 1, scan bracket [1/2, 2].  The mid constant is attained
  // at theta = 2 for both models; values frozen from the closed-form ratios
  //   LinearCV: 1/(1 - ln 2),  PowerLaw(2): 1/(2 - ln 2).
  const auto lin = make_params(Model::LinearCV, 1.0, 2.0, 2.0);
  const auto ql = quadratic_control(lin, 1.0, 1.0, 0.5, 2.0);
  CHECK(ql.pass);
  CHECK(ql.C_mid == doctest::Approx(3.25889135327).epsilon(1e-9));
  CHECK(ql.C_low > 0.0);
  CHECK(ql.C_high > 0.0);
  CHECK(ql.theta_low_edge == doctest::Approx(0.5));
  CHECK(ql.theta_high_edge == doctest::Approx(2.0));

  const auto pow2 = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  const auto qp = quadratic_control(pow2, 1.0, 1.0, 0.5, 2.0);
  CHECK(qp.pass);
  CHECK(qp.C_mid == doctest::Approx(0.765197109517).epsilon(1e-9));

  // The diagonal curvature limit is honored even when the bracket is tiny.
  const auto qn = quadratic_control(lin, 1.0, 1.0, 0.999, 1.001);
  CHECK(qn.C_mid >= 2.0 - 1e-12);

  CHECK_THROWS_AS(quadratic_control(lin, -1.0, 1.0, 0.5, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(quadratic_control(lin, 1.0, 0.5, 0.5, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(quadratic_control(lin, 1.0, 1.0, 2.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("comparing a trajectory with itself gives zero distance") {
  const auto p = make_params(Model::LinearCV, 0.4, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  InitialSpec spec;
  spec.preset = InitialPreset::GaussianHotSpot;
  spec.amplitude = 0.4;
  const InitialData init = build_initial_data(spec, g);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.05;
  const RunResult res = run(init, cfg, p);
  REQUIRE(res.states.size() >= 3);

  const auto rep = weak_strong_compare(res.states, res.states, p);
  CHECK(rep.pass);
  CHECK(rep.proven_regime);
  for (double v : rep.total) CHECK(std::abs(v) <= 1e-14);
  CHECK(rep.fitted_C == 0.0);
  CHECK(rep.c_ref > 0.0);  // the reference trajectory does move
}

TEST_CASE("perturbed trajectory stays inside the exponential envelope") {
  const auto p = make_params(Model::PowerLaw, 0.3, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  InitialSpec spec;
  spec.preset = InitialPreset::StandingWave;
  spec.amplitude = 0.2;
  const InitialData base = build_initial_data(spec, g);
  InitialData bumped = base;
  for (int i = 0; i < 65; ++i)
    bumped.theta0.at(i) += 1e-3 * std::sin(kPi * i * g.spacing(0));

  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.1;
  const RunResult ra = run(bumped, cfg, p);
  const RunResult rb = run(base, cfg, p);
  REQUIRE(ra.states.size() == rb.states.size());

  const auto rep = weak_strong_compare(ra.states, rb.states, p);
  CHECK(rep.pass);
  CHECK(rep.proven_regime);
  CHECK(rep.total.front() > 0.0);
  CHECK(rep.note.empty());
}

TEST_CASE("coupling modes differ by a vanishing scheme-error distance") {
  // Same initial data under Splitting vs Picard: zero distance at t=0, and
  // the trajectory distance is pure scheme error, shrinking under dt
  // refinement (the per-step gap is O(dt^2), so the quadratic distance
  // total contracts by roughly 4x per halving).
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  InitialSpec spec;
  spec.preset = InitialPreset::StandingWave;
  spec.amplitude = 0.2;
  const InitialData init = build_initial_data(spec, g);

  auto max_total = [&](double dt, int stride) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.08;
    RunSinks sinks;
    sinks.state_stride = stride;
    cfg.coupling = Coupling::Splitting;
    const RunResult a = run(init, cfg, p, sinks);
    cfg.coupling = Coupling::Picard;
    const RunResult b = run(init, cfg, p, sinks);
    const auto rep = weak_strong_compare(a.states, b.states, p);
    CHECK(rep.total.front() == 0.0);
    double m = 0.0;
    for (double v : rep.total) m = std::max(m, v);
    return m;
  };

  const double coarse = max_total(2e-3, 1);
  const double fine = max_total(1e-3, 2);
  CHECK(coarse > 0.0);
  CHECK(coarse / fine > 2.5);  // distance vanishes with dt
}

TEST_CASE("fitted rate is finite and stable under time refinement") {
  const auto p = make_params(Model::PowerLaw, 0.3, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  InitialSpec spec;
  spec.preset = InitialPreset::StandingWave;
  spec.amplitude = 0.2;
  const InitialData base = build_initial_data(spec, g);
  InitialData bumped = base;
  for (int i = 0; i < 65; ++i)
    bumped.theta0.at(i) += 1e-3 * std::sin(kPi * i * g.spacing(0));

  auto fitted = [&](double dt, int stride) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.1;
    RunSinks sinks;
    sinks.state_stride = stride;
    const RunResult ra = run(bumped, cfg, p, sinks);
    const RunResult rb = run(base, cfg, p, sinks);
    return weak_strong_compare(ra.states, rb.states, p).fitted_C;
  };

  const double c1 = fitted(1e-3, 1);
  const double c2 = fitted(5e-4, 2);
  CHECK(std::isfinite(c1));
  CHECK(std::isfinite(c2));
  CHECK(std::abs(c1 - c2) <= 0.2 * std::max(std::abs(c1), std::abs(c2)));
}

TEST_CASE("leaving the proven parameter regime is flagged, not hidden") {
  const auto p = make_params(Model::PowerLaw, 0.3, 1.5, 1.0);
  const Grid g = Grid::line(1.0, 17);
  std::vector<SimState> traj = {rest_state(g, 1.0), rest_state(g, 1.0)};
  traj[1].t = 0.1;

  const auto rep = weak_strong_compare(traj, traj, p);
  CHECK_FALSE(rep.proven_regime);
  CHECK(!rep.note.empty());
  CHECK(rep.pass);  // self-distance is still zero

  // Mismatched lengths and timestamps are rejected outright.
  std::vector<SimState> shifted = traj;
  shifted[1].t = 0.2;
  CHECK_THROWS_AS(weak_strong_compare(traj, shifted, p),
                  std::invalid_argument);
  std::vector<SimState> shorter = {traj[0]};
  CHECK_THROWS_AS(weak_strong_compare(traj, shorter, p),
                  std::invalid_argument);
}
