#include "tesim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "tesim/balance.hpp"
#include "tesim/banded.hpp"
#include "tesim/constitutive.hpp"
#include "tesim/grid_ops.hpp"
#include "tesim/presets.hpp"
#include "tesim/relative_entropy.hpp"
#include "tesim/solver.hpp"

namespace tesim {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using CheckFn = std::function<Outcome()>;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Outcome expect(bool cond, const std::string& detail) {
  return {cond, detail};
}

// ---------------------------------------------------------------- helpers

RunResult quiet_run(const InitialData& init, const SolverConfig& cfg,
                    const ConstitutiveParams& p, bool keep_states = false,
                    int state_stride = 1) {
  RunSinks sinks;
  sinks.ledger_stride = 1;
  sinks.state_stride = state_stride;
  sinks.store_states = keep_states;
  return run(init, cfg, p, sinks);
}

InitialData hot_spot_init(const Grid& g, double base, double amp) {
  InitialSpec spec;
  spec.preset = InitialPreset::GaussianHotSpot;
  spec.theta_base = base;
  spec.amplitude = amp;
  return build_initial_data(spec, g);
}

InitialData standing_wave_init(const Grid& g, double amp, double base = 1.0) {
  InitialSpec spec;
  spec.preset = InitialPreset::StandingWave;
  spec.theta_base = base;
  spec.amplitude = amp;
  return build_initial_data(spec, g);
}

// ------------------------------------------------------- constitutive

Outcome check_gibbs_case(const ConstitutiveParams& p) {
  const GibbsReport rep = check_gibbs(p, 0.1, 10.0);
  return expect(rep.pass, "max Gibbs-relation violation " +
                              num(rep.max_violation) + " (tol " +
                              num(rep.tol) + ")");
}

Outcome check_stability_case(const ConstitutiveParams& p) {
  const StabilityReport rep = check_stability(p, 3);
  std::string detail = "e1>0:" + std::to_string(rep.e1_positive) +
                       " cV>0:" + std::to_string(rep.cv_positive) +
                       " s1->-inf:" + std::to_string(rep.entropy_unbounded) +
                       " coupling c2=" + num(rep.c2);
  return expect(rep.pass, detail);
}

Outcome check_alpha_rejected() {
  try {
    make_params(Model::PowerLaw, 1.0, 0.5, 2.0);
  } catch (const std::invalid_argument& e) {
    return expect(true, std::string("rejected: ") + e.what());
  }
  return expect(false, "alpha=0.5 was not rejected");
}

Outcome check_mollified_limit() {
  const auto p = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  const double theta = 1.7;
  const double exact = internal_energy(p, theta);
  double prev = 1e300;
  bool monotone = true;
  double rel = 0.0;
  for (double omega : {1e-1, 1e-2, 1e-3}) {
    auto q = p;
    q.omega = omega;
    rel = std::abs(mollified_energy(q, theta) - exact) / exact;
    if (rel > prev) monotone = false;
    prev = rel;
  }
  return expect(monotone && rel < 1e-2,
                "relative gap at omega=1e-3: " + num(rel));
}

Outcome check_helmholtz_minimum() {
  const auto p = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  const double theta_ref = 1.3;
  // Log-spaced scan; the minimum of theta -> helmholtz(theta, ref) must land
  // within one grid cell of theta == theta_ref.
  const int n = 10000;
  double best = 1e300;
  int arg = -1;
  for (int i = 0; i < n; ++i) {
    const double theta =
        std::exp(std::log(0.05) + (std::log(20.0) - std::log(0.05)) *
                                      (static_cast<double>(i) / (n - 1)));
    const double f = helmholtz(p, theta, theta_ref);
    if (f < best) {
      best = f;
      arg = i;
    }
  }
  const double step = (std::log(20.0) - std::log(0.05)) / (n - 1);
  const double found =
      std::exp(std::log(0.05) + step * static_cast<double>(arg));
  const double cell = std::abs(std::log(found) - std::log(theta_ref)) / step;
  return expect(cell <= 1.0, "argmin " + num(found) + " vs " + num(theta_ref) +
                                 " (" + num(cell) + " cells away)");
}

// ---------------------------------------------------------- operators

Outcome check_gradient_linear() {
  double worst = 0.0;
  {
    const Grid g = Grid::line(2.0, 41);
    Field f = Field::scalar(g);
    for (int i = 0; i < g.cells[0]; ++i)
      f.at(i) = 0.7 + 1.3 * (i * g.spacing(0));
    const Field df = gradient(f);
    for (int i = 0; i < g.cells[0]; ++i)
      worst = std::max(worst, std::abs(df.at(i) - 1.3));
  }
  {
    const Grid g = Grid::rectangle(1.0, 2.0, 17, 23);
    Field f = Field::scalar(g);
    for (int iy = 0; iy < g.cells[1]; ++iy)
      for (int ix = 0; ix < g.cells[0]; ++ix)
        f.at(g.index(ix, iy)) =
            0.2 + 0.5 * ix * g.spacing(0) - 2.0 * iy * g.spacing(1);
    const Field df = gradient(f);
    for (int n = 0; n < g.node_count(); ++n) {
      worst = std::max(worst, std::abs(df.at(n, 0) - 0.5));
      worst = std::max(worst, std::abs(df.at(n, 1) + 2.0));
    }
  }
  return expect(worst < 1e-13, "max |grad(linear) - slope| = " + num(worst));
}

Outcome check_divergence_identity() {
  const Grid g = Grid::rectangle(1.0, 1.0, 19, 19);
  Field w = Field::vector(g);
  for (int iy = 0; iy < g.cells[1]; ++iy)
    for (int ix = 0; ix < g.cells[0]; ++ix) {
      w.at(g.index(ix, iy), 0) = ix * g.spacing(0);
      w.at(g.index(ix, iy), 1) = iy * g.spacing(1);
    }
  const Field dv = divergence(w);
  double worst = 0.0;
  for (int n = 0; n < g.node_count(); ++n)
    worst = std::max(worst, std::abs(dv.at(n) - 2.0));
  return expect(worst < 1e-12, "max |div(x,y) - 2| = " + num(worst));
}

Outcome check_adjointness_1d() {
  const Grid g = Grid::line(1.0, 101);
  Field f = Field::scalar(g), w = Field::vector(g);
  for (int i = 0; i < g.cells[0]; ++i) {
    const double x = i * g.spacing(0);
    f.at(i) = std::exp(x);
    w.at(i) = std::sin(kPi * x);  // vanishes at both ends
  }
  const double lhs = inner(f, divergence(w));
  const double rhs = -inner(gradient(f), w);
  const double gap = std::abs(lhs - rhs);
  return expect(gap < 1e-10, "|<f,div w> + <grad f,w>| = " + num(gap));
}

Outcome check_adjointness_2d() {
  const Grid g = Grid::rectangle(1.0, 1.0, 33, 17);
  Field f = Field::scalar(g);
  Field w = Field::vector(g);
  for (int iy = 0; iy < g.cells[1]; ++iy)
    for (int ix = 0; ix < g.cells[0]; ++ix) {
      const double x = ix * g.spacing(0), y = iy * g.spacing(1);
      const int n = g.index(ix, iy);
      f.at(n) = std::cos(2 * x + y) + x * y;
      w.at(n, 0) = std::sin(kPi * x) * std::sin(kPi * y);
      w.at(n, 1) = std::sin(2 * kPi * x) * std::sin(kPi * y);
    }
  const double lhs = inner(f, divergence(w));
  const double rhs = -inner(gradient(f), w);
  const double gap = std::abs(lhs - rhs);
  return expect(gap < 1e-10, "|<f,div w> + <grad f,w>| = " + num(gap));
}

Outcome check_elastic_energy_identity() {
  const Grid g = Grid::line(1.0, 64);
  Field u = Field::vector(g);
  for (int i = 0; i < g.cells[0]; ++i) {
    const double x = i * g.spacing(0);
    u.at(i) = std::sin(kPi * x) * (1.0 + 0.3 * std::cos(3 * kPi * x));
  }
  const double direct = elastic_energy(u);
  const double viaL = -0.5 * inner(u, laplacian_dirichlet(u));
  const double gap = std::abs(direct - viaL) / std::max(1.0, direct);
  return expect(gap < 1e-12, "relative gap " + num(gap));
}

Outcome check_diffusion_mass() {
  const auto p = make_params(Model::PowerLaw, 1.0, 2.0, 1.5);
  const Grid g = Grid::line(1.0, 77);
  Field theta = Field::scalar(g), kap = Field::scalar(g);
  for (int i = 0; i < g.cells[0]; ++i) {
    const double x = i * g.spacing(0);
    theta.at(i) = 1.5 + 0.8 * std::cos(2 * kPi * x) * std::exp(-x);
    kap.at(i) = conductivity(p, theta.at(i));
  }
  const double mass = integrate(variable_coefficient_diffusion(kap, theta));
  return expect(std::abs(mass) < 1e-12,
                "|int div(kappa grad theta)| = " + num(std::abs(mass)));
}

Outcome check_neumann_constant() {
  const Grid g = Grid::rectangle(1.0, 1.0, 11, 13);
  Field f = Field::scalar(g);
  for (int n = 0; n < g.node_count(); ++n) f.at(n) = 3.25;
  const double worst = max_abs(laplacian_neumann(f));
  return expect(worst == 0.0, "max |lap_N(const)| = " + num(worst));
}

Outcome check_banded_lu() {
  // Deterministic nonsymmetric pentadiagonal system; verify against a known
  // solution.
  const int n = 40;
  BandedMatrix A(n, 2, 2);
  std::vector<double> xstar(n), b(n, 0.0);
  for (int i = 0; i < n; ++i) xstar[i] = std::sin(0.7 * i) + 0.1 * i;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
      const double a =
          (i == j) ? 6.0 + std::cos(0.3 * i) : 1.0 / (1.0 + std::abs(i - j)) *
                                                   std::sin(1.0 + i + 2 * j);
      A.at(i, j) = a;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j)
      b[i] += A.at(i, j) * xstar[j];
  A.factor();
  A.solve(b);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(b[i] - xstar[i]));
  return expect(worst < 1e-11, "max solve error " + num(worst));
}

// ----------------------------------------------------------- balances

Outcome check_equilibrium_residuals() {
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  InitialSpec spec;  // Equilibrium defaults, theta = 1
  const InitialData init = build_initial_data(spec, g);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 0.1;
  const RunResult res = quiet_run(init, cfg, p);
  double worst = 0.0;
  for (const auto& row : res.ledger)
    worst = std::max({worst, std::abs(row.energy_residual),
                      std::abs(row.dissipation_residual)});
  return expect(worst < 1e-10, "max |residual| = " + num(worst));
}

Outcome check_hot_spot_energy() {
  const auto p = make_params(Model::LinearCV, 0.1, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  const InitialData init = hot_spot_init(g, 1.0, 0.5);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  const RunResult res = quiet_run(init, cfg, p);
  const double e0 = res.ledger.front().thermal + res.ledger.front().kinetic +
                    res.ledger.front().elastic;
  double worst = 0.0;
  for (const auto& row : res.ledger)
    worst = std::max(worst, std::abs(row.energy_residual));
  const double rel = worst / std::max(1.0, e0);
  return expect(rel < 1e-3, "max |energy residual| / E0 = " + num(rel));
}

Outcome check_production_nonnegative() {
  const auto p = make_params(Model::PowerLaw, 0.1, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  const InitialData init = hot_spot_init(g, 1.0, 1.0);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  const RunResult res = quiet_run(init, cfg, p, true, 10);
  double least = 1e300;
  for (const auto& s : res.states)
    least = std::min(least, field_min(entropy_production_field(s.theta, p)));
  return expect(least >= 0.0, "min pointwise production = " + num(least));
}

Outcome check_dissipation_monotone() {
  const auto p = make_params(Model::LinearCV, 0.1, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  const InitialData init = hot_spot_init(g, 1.0, 0.5);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  const RunResult res = quiet_run(init, cfg, p);
  bool monotone = true;
  double prev = -1.0;
  for (const auto& row : res.ledger) {
    if (row.dissipation_cum < prev) monotone = false;
    prev = row.dissipation_cum;
  }
  return expect(monotone,
                "final cumulative dissipation = " + num(prev));
}

Outcome check_dissipation_residual() {
  const auto p = make_params(Model::LinearCV, 0.1, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  const InitialData init = hot_spot_init(g, 1.0, 0.5);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.25;
  const RunResult res = quiet_run(init, cfg, p);
  double worst = 0.0;
  for (const auto& row : res.ledger)
    worst = std::max(worst, std::abs(row.dissipation_residual));
  return expect(worst < 1e-2, "max |dissipation residual| = " + num(worst));
}

Outcome check_min_bound() {
  const auto p = make_params(Model::LinearCV, 0.3, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  const InitialData init = hot_spot_init(g, 0.1, 1.0);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.2;
  const RunResult res = quiet_run(init, cfg, p);
  const std::vector<double> bound =
      min_temperature_bound(field_min(init.theta0), res.diag.t,
                            res.diag.a_inf);
  double worst_margin = 1e300;
  for (size_t k = 0; k < res.ledger.size(); ++k) {
    const double margin = res.ledger[k].min_theta / bound[k];
    worst_margin = std::min(worst_margin, margin);
  }
  return expect(worst_margin >= 0.99,
                "min (theta_min / envelope) = " + num(worst_margin));
}

Outcome check_delta_bracket() {
  const auto p = make_params(Model::PowerLaw, 0.2, 2.0, 2.0, 1e-2);
  const Grid g = Grid::line(1.0, 49);
  const InitialData init = hot_spot_init(g, 1.0, 1.0);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.2;
  const RunResult res = quiet_run(init, cfg, p);
  double a_min = 0.0, a_max = 0.0;
  for (size_t k = 0; k < res.diag.t.size(); ++k) {
    a_min = std::min(a_min, p.mu * res.diag.div_v_min[k]);
    a_max = std::max(a_max, p.mu * res.diag.div_v_max[k]);
  }
  const ComparisonBracket b = comparison_bracket(
      field_min(init.theta0), field_max(init.theta0), a_min, a_max, p.delta);
  bool inside = true;
  for (const auto& row : res.ledger)
    if (row.min_theta < b.lower * (1 - 1e-10) ||
        row.max_theta > b.upper * (1 + 1e-10))
      inside = false;
  return expect(inside, "bracket [" + num(b.lower) + ", " + num(b.upper) +
                            "], run range [" +
                            num(res.theta_min_overall) + ", " +
                            num(field_max(res.final_state.theta)) + "]");
}

Outcome check_log_form_consistency() {
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  const InitialData init = standing_wave_init(g, 0.1);
  auto final_gap = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.1;
    cfg.heat_formulation = HeatForm::Temperature;
    const Field a = quiet_run(init, cfg, p).final_state.theta;
    cfg.heat_formulation = HeatForm::LogTemperature;
    const Field b = quiet_run(init, cfg, p).final_state.theta;
    Field d = a;
    for (size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
    return max_abs(d);
  };
  const double d1 = final_gap(4e-3);
  const double d2 = final_gap(2e-3);
  return expect(d2 < 0.75 * d1, "formulation gap " + num(d1) + " -> " +
                                    num(d2) + " under dt halving");
}

// ------------------------------------------------------------- relent

Outcome check_density_properties() {
  const auto p = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  double least = 1e300;
  double at_equal = -1.0;
  for (double Theta : {0.5, 1.0, 2.0}) {
    at_equal = std::max(at_equal,
                        rel_entropy_density_nonlinear(p, Theta, Theta));
    for (double theta : {0.05, 0.3, 0.9, 1.1, 3.0, 20.0}) {
      least = std::min(least, rel_entropy_density_nonlinear(p, theta, Theta));
      least = std::min(least,
                       rel_entropy_density_linear(std::log(theta), Theta));
    }
  }
  return expect(least >= 0.0 && std::abs(at_equal) < 1e-14,
                "min density " + num(least) + ", |density at equality| " +
                    num(std::abs(at_equal)));
}

Outcome check_quadratic_limit() {
  const auto lin = make_params(Model::LinearCV, 1.0, 2.0, 2.0);
  const auto pow2 = make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  double worst = 0.0;
  for (const auto* p : {&lin, &pow2}) {
    for (double Theta : {0.7, 1.0, 1.8}) {
      const double limit = quadratic_ratio_limit(*p, Theta);
      const double theta = Theta * (1.0 + 1e-5);
      const double fd = (theta - Theta) * (theta - Theta) /
                        rel_entropy_density_nonlinear(*p, theta, Theta);
      worst = std::max(worst, std::abs(fd - limit) / limit);
    }
  }
  return expect(worst < 1e-4,
                "max relative gap limit-vs-sampled = " + num(worst));
}

Outcome check_quadratic_control(Model model) {
  const auto p = model == Model::LinearCV
                     ? make_params(Model::LinearCV, 1.0, 2.0, 2.0)
                     : make_params(Model::PowerLaw, 1.0, 2.0, 2.0);
  const QuadraticControl qc = quadratic_control(p, 0.5, 2.0, 0.25, 4.0);
  return expect(qc.pass, "C_mid=" + num(qc.C_mid) + " C_low=" + num(qc.C_low) +
                             " C_high=" + num(qc.C_high));
}

Outcome check_self_compare() {
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 33);
  const InitialData init = standing_wave_init(g, 0.1);
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.1;
  const RunResult res = quiet_run(init, cfg, p, true, 10);
  const RelEntReport rep = weak_strong_compare(res.states, res.states, p);
  double worst = 0.0;
  for (double tot : rep.total) worst = std::max(worst, std::abs(tot));
  return expect(rep.pass && worst <= 1e-14,
                "max |total| for identical runs = " + num(worst));
}

Outcome check_perturbed_envelope() {
  const auto p = make_params(Model::LinearCV, 0.5, 2.0, 2.0);
  const Grid g = Grid::line(1.0, 65);
  const InitialData ref = standing_wave_init(g, 0.1);
  InitialData pert = ref;
  for (int i = 0; i < g.cells[0]; ++i)
    pert.theta0.at(i) += 1e-3 * std::sin(kPi * i * g.spacing(0));
  SolverConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 0.2;
  const RunResult rr = quiet_run(ref, cfg, p, true, 5);
  const RunResult rp = quiet_run(pert, cfg, p, true, 5);
  const RelEntReport rep = weak_strong_compare(rp.states, rr.states, p);
  return expect(rep.pass && rep.proven_regime,
                "total(0)=" + num(rep.total.front()) + " total(end)=" +
                    num(rep.total.back()) + " fitted C=" + num(rep.fitted_C));
}

Outcome check_outside_regime() {
  const auto p = make_params(Model::PowerLaw, 0.5, 1.5, 1.0);
  const Grid g = Grid::line(1.0, 17);
  const InitialData init = standing_wave_init(g, 0.05);
  SolverConfig cfg;
  cfg.dt = 5e-3;
  cfg.t_end = 0.02;
  const RunResult res = quiet_run(init, cfg, p, true, 2);
  const RelEntReport rep = weak_strong_compare(res.states, res.states, p);
  return expect(!rep.proven_regime && !rep.note.empty(),
                "note: " + rep.note);
}

// ------------------------------------------------------------ plumbing

std::vector<std::pair<std::string, CheckFn>> build_checks(
    const std::string& suite) {
  std::vector<std::pair<std::string, CheckFn>> checks;
  auto add = [&](const std::string& name, CheckFn fn) {
    checks.emplace_back(name, std::move(fn));
  };

  if (suite == "constitutive") {
    add("gibbs_linear_cv",
        [] { return check_gibbs_case(make_params(Model::LinearCV, 1, 2, 2)); });
    add("gibbs_power_law_2_2",
        [] { return check_gibbs_case(make_params(Model::PowerLaw, 1, 2, 2)); });
    add("gibbs_power_law_frac", [] {
      return check_gibbs_case(make_params(Model::PowerLaw, 1, 1.5, 0.5));
    });
    add("stability_linear_cv", [] {
      return check_stability_case(make_params(Model::LinearCV, 1, 2, 2));
    });
    add("stability_power_law", [] {
      return check_stability_case(make_params(Model::PowerLaw, 1, 3, 2));
    });
    add("reject_alpha_below_one", check_alpha_rejected);
    add("mollified_energy_limit", check_mollified_limit);
    add("helmholtz_minimum_at_reference", check_helmholtz_minimum);
  } else if (suite == "operators") {
    add("gradient_exact_on_linears", check_gradient_linear);
    add("divergence_identity_2d", check_divergence_identity);
    add("adjointness_1d", check_adjointness_1d);
    add("adjointness_2d", check_adjointness_2d);
    add("elastic_energy_identity", check_elastic_energy_identity);
    add("diffusion_conserves_mass", check_diffusion_mass);
    add("neumann_laplacian_on_constants", check_neumann_constant);
    add("banded_lu_solve", check_banded_lu);
  } else if (suite == "balances") {
    add("equilibrium_residuals", check_equilibrium_residuals);
    add("hot_spot_energy_residual", check_hot_spot_energy);
    add("production_nonnegative", check_production_nonnegative);
    add("dissipation_monotone", check_dissipation_monotone);
    add("dissipation_residual_small", check_dissipation_residual);
    add("min_temperature_envelope", check_min_bound);
    add("delta_comparison_bracket", check_delta_bracket);
    add("log_form_consistency", check_log_form_consistency);
  } else if (suite == "relent") {
    add("density_nonnegative", check_density_properties);
    add("quadratic_ratio_limit", check_quadratic_limit);
    add("quadratic_control_linear_cv",
        [] { return check_quadratic_control(Model::LinearCV); });
    add("quadratic_control_power_law",
        [] { return check_quadratic_control(Model::PowerLaw); });
    add("self_compare_is_zero", check_self_compare);
    add("perturbed_envelope", check_perturbed_envelope);
    add("outside_proven_regime_flagged", check_outside_regime);
  } else {
    throw std::invalid_argument("unknown verify suite: " + suite +
                                " (expected constitutive | operators | "
                                "balances | relent)");
  }
  return checks;
}

int thread_cap() {
  if (const char* env = std::getenv("TESIM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

CheckResult run_one(const std::string& name, const CheckFn& fn) {
  CheckResult r;
  r.name = name;
  try {
    const Outcome o = fn();
    r.pass = o.pass;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace

bool SuiteReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

std::string SuiteReport::table() const {
  std::ostringstream out;
  out << "suite: " << suite << "\n";
  size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  int passed = 0;
  for (const auto& c : checks) {
    out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
        << std::string(width - c.name.size() + 2, ' ') << c.detail << "\n";
    passed += c.pass ? 1 : 0;
  }
  out << "  " << passed << "/" << checks.size() << " checks passed\n";
  return out.str();
}

std::vector<std::string> verify_suite_names() {
  return {"constitutive", "operators", "balances", "relent"};
}

SuiteReport run_verify_suite(const std::string& suite) {
  const auto checks = build_checks(suite);
  SuiteReport rep;
  rep.suite = suite;
  rep.checks.resize(checks.size());

  const size_t cap = static_cast<size_t>(thread_cap());
  size_t next = 0;
  while (next < checks.size()) {
    const size_t batch = std::min(cap, checks.size() - next);
    std::vector<std::future<CheckResult>> futures;
    futures.reserve(batch);
    for (size_t j = 0; j < batch; ++j) {
      const auto& item = checks[next + j];
      futures.push_back(std::async(std::launch::async, [&item] {
        return run_one(item.first, item.second);
      }));
    }
    for (size_t j = 0; j < batch; ++j)
      rep.checks[next + j] = futures[j].get();
    next += batch;
  }
  return rep;
}

}  // namespace tesim
