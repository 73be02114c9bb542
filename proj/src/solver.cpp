#include "tesim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tesim/banded.hpp"
#include "tesim/grid_ops.hpp"

namespace tesim {

namespace {

bool is_boundary(const Grid& g, int ix, int iy) {
  if (ix == 0 || ix == g.cells[0] - 1) return true;
  return g.dim == 2 && (iy == 0 || iy == g.cells[1] - 1);
}

double node_x(const Grid& g, int ix) { return ix * g.spacing(0); }
double node_y(const Grid& g, int iy) {
  return g.dim == 2 ? iy * g.spacing(1) : 0.0;
}

// kappa'(theta) for the Jacobian of the flux form.
double conductivity_deriv(const ConstitutiveParams& p, double theta) {
  if (p.model == Model::LinearCV) return 0.0;
  return p.beta * std::pow(theta, p.beta - 1.0);
}

struct AxisLines {
  int n, stride, lines, lstride;
  double h;
};

AxisLines axis_lines(const Grid& g, int axis) {
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  if (axis == 0) return {nx, 1, ny, nx, g.spacing(0)};
  return {ny, nx, nx, 1, g.spacing(1)};
}

int jacobian_bandwidth(const Grid& g) {
  return g.dim == 1 ? 1 : g.cells[0];
}

}  // namespace

std::vector<std::string> SolverConfig::violations() const {
  std::vector<std::string> out;
  if (!(dt > 0.0)) out.push_back("dt: must be > 0");
  if (!(t_end >= 0.0)) out.push_back("t_end: must be >= 0");
  if (!(picard_tol > 0.0)) out.push_back("picard_tol: must be > 0");
  if (picard_max_iters < 1) out.push_back("picard_max_iters: must be >= 1");
  if (!(newton_tol > 0.0)) out.push_back("newton_tol: must be > 0");
  if (newton_max_iters < 1) out.push_back("newton_max_iters: must be >= 1");
  return out;
}

void SolverConfig::validate() const {
  const auto bad = violations();
  if (bad.empty()) return;
  std::string msg = "invalid solver configuration:";
  for (const auto& b : bad) msg += " [" + b + "]";
  throw std::invalid_argument(msg);
}

void InitialData::validate() const {
  if (!(u0.grid == v0.grid) || !(u0.grid == theta0.grid))
    throw std::invalid_argument("InitialData: fields on different grids");
  if (theta0.components != 1)
    throw std::invalid_argument("InitialData: theta0 must be scalar");
  if (u0.components != u0.grid.dim || v0.components != v0.grid.dim)
    throw std::invalid_argument("InitialData: u0/v0 must be vector fields");
  if (!(field_min(theta0) > 0.0))
    throw std::domain_error("InitialData: theta0 must be positive");
  const Grid& g = u0.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (!is_boundary(g, ix, iy)) continue;
      const int n = g.index(ix, iy);
      for (int c = 0; c < u0.components; ++c)
        if (u0.at(n, c) != 0.0 || v0.at(n, c) != 0.0)
          throw std::invalid_argument(
              "InitialData: u0/v0 must vanish on the boundary");
    }
}

NewtonDivergence::NewtonDivergence(double r, int it)
    : SolverError("Newton iteration did not converge (residual " +
                  std::to_string(r) + " after " + std::to_string(it) +
                  " iterations)"),
      last_residual(r),
      iters(it) {}

PositivityLoss::PositivityLoss(double worst)
    : SolverError("positivity line search failed (worst theta " +
                  std::to_string(worst) + ")"),
      worst_theta(worst) {}

PicardDivergence::PicardDivergence(double d, int it)
    : SolverError("Picard coupling did not converge (delta " +
                  std::to_string(d) + " after " + std::to_string(it) +
                  " iterations)"),
      last_delta(d),
      iters(it) {}

std::pair<Field, Field> momentum_step(const SimState& s,
                                      const Field& theta_source, double dt,
                                      const ConstitutiveParams& p,
                                      const Forcing* forcing) {
  require_same_grid(s.u, theta_source, "momentum_step");
  const Grid& g = s.u.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  const Field grad_theta = gradient(theta_source);
  const double t_half = s.t + 0.5 * dt;

  // Acceleration lap(u) - mu*grad(theta) (+ forcing), zero on the boundary.
  auto accel = [&](const Field& u) {
    Field a = laplacian_dirichlet(u);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        if (is_boundary(g, ix, iy)) continue;
        const int n = g.index(ix, iy);
        for (int c = 0; c < a.components; ++c) {
          a.at(n, c) -= p.mu * grad_theta.at(n, c);
          if (forcing && forcing->momentum)
            a.at(n, c) +=
                forcing->momentum(t_half, node_x(g, ix), node_y(g, iy), c);
        }
      }
    return a;
  };

  Field v_half = s.v;
  {
    const Field a1 = accel(s.u);
    for (size_t i = 0; i < v_half.values.size(); ++i)
      v_half.values[i] += 0.5 * dt * a1.values[i];
  }
  Field u_new = s.u;
  for (size_t i = 0; i < u_new.values.size(); ++i)
    u_new.values[i] += dt * v_half.values[i];
  Field v_new = v_half;
  {
    const Field a2 = accel(u_new);
    for (size_t i = 0; i < v_new.values.size(); ++i)
      v_new.values[i] += 0.5 * dt * a2.values[i];
  }
  return {std::move(u_new), std::move(v_new)};
}

namespace {

// Shared Newton scaffolding for the two heat formulations: assemble the
// banded Jacobian and residual through callbacks, iterate with an optional
// positivity line search on the iterate.
struct NewtonProblem {
  std::function<void(const std::vector<double>&, std::vector<double>&)>
      residual;
  std::function<void(const std::vector<double>&, BandedMatrix&)> jacobian;
  bool enforce_positive = false;
};

std::vector<double> newton_solve(const NewtonProblem& prob,
                                 std::vector<double> x, const Grid& g,
                                 const SolverConfig& cfg) {
  const int n = static_cast<int>(x.size());
  const int bw = jacobian_bandwidth(g);
  BandedMatrix jac(n, bw, bw);
  std::vector<double> r(n), step(n);

  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
  };

  prob.residual(x, r);
  double rnorm = inf_norm(r);
  for (int it = 0; it < cfg.newton_max_iters; ++it) {
    if (rnorm <= cfg.newton_tol) return x;
    jac.clear();
    prob.jacobian(x, jac);
    try {
      jac.factor();
      step = r;
      jac.solve(step);  // step = J^{-1} r, applied with a minus sign below
    } catch (const std::exception& e) {
      throw SolverError(std::string("Newton linear solve failed: ") +
                        e.what());
    }

    double lambda = 1.0;
    std::vector<double> trial(n);
    for (int halving = 0;; ++halving) {
      for (int i = 0; i < n; ++i) trial[i] = x[i] - lambda * step[i];
      if (!prob.enforce_positive) break;
      const double worst = *std::min_element(trial.begin(), trial.end());
      if (worst > 0.0) break;
      if (halving >= 60) throw PositivityLoss(worst);
      lambda *= 0.5;
    }
    x.swap(trial);
    prob.residual(x, r);
    rnorm = inf_norm(r);
  }
  if (rnorm <= cfg.newton_tol) return x;
  throw NewtonDivergence(rnorm, cfg.newton_max_iters);
}

// Add the Jacobian of the conservative flux-form diffusion, scaled by
// `scale`, into the banded matrix.  kappa and its derivative are evaluated
// from `theta` through the callbacks.
template <class K, class KP>
void add_flux_jacobian(const Grid& g, const std::vector<double>& theta,
                       const K& kap, const KP& kap_prime, double scale,
                       BandedMatrix& jac) {
  for (int axis = 0; axis < g.dim; ++axis) {
    const AxisLines ax = axis_lines(g, axis);
    const double ih2 = 1.0 / (ax.h * ax.h);
    for (int l = 0; l < ax.lines; ++l) {
      const int base = l * ax.lstride;
      auto node = [&](int i) { return base + i * ax.stride; };
      // d(flux_i)/d(theta_i), d(flux_i)/d(theta_{i+1}) for face (i, i+1)
      for (int i = 0; i + 1 < ax.n; ++i) {
        const int a = node(i), b = node(i + 1);
        const double dtheta = theta[b] - theta[a];
        const double kmean = 0.5 * (kap(theta[a]) + kap(theta[b]));
        const double dfa = 0.5 * kap_prime(theta[a]) * dtheta - kmean;
        const double dfb = 0.5 * kap_prime(theta[b]) * dtheta + kmean;
        // Contribution of face flux to the divergence rows:
        //   row a: +flux (factor 2 at the boundary), row b: -flux (same).
        const double wa = (i == 0) ? 2.0 : 1.0;
        const double wb = (i + 2 == ax.n) ? 2.0 : 1.0;
        jac.at(a, a) += scale * wa * ih2 * dfa;
        jac.at(a, b) += scale * wa * ih2 * dfb;
        jac.at(b, a) -= scale * wb * ih2 * dfa;
        jac.at(b, b) -= scale * wb * ih2 * dfb;
      }
    }
  }
}

}  // namespace

Field heat_step(const SimState& s, const Field& div_vt, double dt,
                const ConstitutiveParams& p, const SolverConfig& cfg,
                const Forcing* forcing) {
  require_same_grid(s.theta, div_vt, "heat_step");
  if (div_vt.components != 1)
    throw std::invalid_argument("heat_step: div_vt must be scalar");
  const Grid& g = s.theta.grid;
  const int n = g.node_count();
  const double t_new = s.t + dt;

  Field gfield = Field::scalar(g);
  if (forcing && forcing->heat) {
    const int nx = g.cells[0];
    const int ny = g.dim == 2 ? g.cells[1] : 1;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        gfield.at(g.index(ix, iy)) =
            forcing->heat(t_new, node_x(g, ix), node_y(g, iy));
  }

  std::vector<double> e1_old(n);
  for (int i = 0; i < n; ++i)
    e1_old[i] = internal_energy(p, s.theta.values[i]);

  auto kap = [&](double th) { return conductivity(p, th); };
  auto kap_p = [&](double th) { return conductivity_deriv(p, th); };

  NewtonProblem prob;
  prob.enforce_positive = true;
  prob.residual = [&](const std::vector<double>& th, std::vector<double>& r) {
    Field theta = Field::scalar(g), kappa = Field::scalar(g);
    theta.values = th;
    for (int i = 0; i < n; ++i) kappa.values[i] = kap(th[i]);
    const Field diff = variable_coefficient_diffusion(kappa, theta);
    for (int i = 0; i < n; ++i) {
      double rhs = diff.values[i] - p.mu * th[i] * div_vt.values[i] +
                   gfield.values[i];
      if (p.delta > 0.0)
        rhs += p.delta * (1.0 / (th[i] * th[i]) - th[i] * th[i]);
      r[i] = internal_energy(p, th[i]) - e1_old[i] - dt * rhs;
    }
  };
  prob.jacobian = [&](const std::vector<double>& th, BandedMatrix& jac) {
    for (int i = 0; i < n; ++i) {
      double diag = heat_capacity(p, th[i]) + dt * p.mu * div_vt.values[i];
      if (p.delta > 0.0)
        diag += dt * p.delta * (2.0 * th[i] + 2.0 / (th[i] * th[i] * th[i]));
      jac.at(i, i) += diag;
    }
    add_flux_jacobian(g, th, kap, kap_p, -dt, jac);
  };

  std::vector<double> theta_new =
      newton_solve(prob, s.theta.values, g, cfg);
  Field out = Field::scalar(g);
  out.values = std::move(theta_new);
  return out;
}

Field heat_step_log(const SimState& s, const Field& u_new, double dt,
                    const ConstitutiveParams& p, const SolverConfig& cfg,
                    const Forcing* forcing) {
  if (p.model != Model::LinearCV)
    throw std::invalid_argument(
        "heat_step_log: log-temperature form requires the LinearCV model");
  if (p.delta != 0.0)
    throw std::invalid_argument(
        "heat_step_log: log-temperature form requires delta == 0");
  require_same_grid(s.theta, u_new, "heat_step_log");
  const Grid& g = s.theta.grid;
  const int n = g.node_count();
  const double t_new = s.t + dt;

  // Data term: tau_old - mu*(div u_new - div u_old), fixed during Newton.
  const Field div_old = divergence(s.u);
  const Field div_new = divergence(u_new);
  std::vector<double> data(n);
  for (int i = 0; i < n; ++i) {
    data[i] = std::log(s.theta.values[i]) -
              p.mu * (div_new.values[i] - div_old.values[i]);
  }

  Field gfield = Field::scalar(g);
  const bool has_forcing = forcing && forcing->heat;
  if (has_forcing) {
    const int nx = g.cells[0];
    const int ny = g.dim == 2 ? g.cells[1] : 1;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        gfield.at(g.index(ix, iy)) =
            forcing->heat(t_new, node_x(g, ix), node_y(g, iy));
  }

  NewtonProblem prob;
  prob.enforce_positive = false;  // theta = exp(tau) is positive structurally
  prob.residual = [&](const std::vector<double>& tv, std::vector<double>& r) {
    Field tau = Field::scalar(g);
    tau.values = tv;
    const Field lap = laplacian_neumann(tau);
    const Field grad = gradient(tau);
    for (int i = 0; i < n; ++i) {
      double g2 = 0.0;
      for (int c = 0; c < grad.components; ++c)
        g2 += grad.at(i, c) * grad.at(i, c);
      double rhs = lap.values[i] + g2;
      if (has_forcing) rhs += gfield.values[i] * std::exp(-tv[i]);
      r[i] = tv[i] - data[i] - dt * rhs;
    }
  };
  prob.jacobian = [&](const std::vector<double>& tv, BandedMatrix& jac) {
    Field tau = Field::scalar(g);
    tau.values = tv;
    const Field grad = gradient(tau);
    for (int i = 0; i < n; ++i) {
      double diag = 1.0;
      if (has_forcing) diag += dt * gfield.values[i] * std::exp(-tv[i]);
      jac.at(i, i) += diag;
    }
    // -dt * laplacian_neumann and -dt * d(|grad tau|^2)
    for (int axis = 0; axis < g.dim; ++axis) {
      const AxisLines ax = axis_lines(g, axis);
      const double ih2 = 1.0 / (ax.h * ax.h);
      const double ih = 1.0 / ax.h;
      for (int l = 0; l < ax.lines; ++l) {
        const int base = l * ax.lstride;
        auto node = [&](int i) { return base + i * ax.stride; };
        for (int i = 0; i < ax.n; ++i) {
          const int a = node(i);
          // Laplacian row (mirror ghosts at the ends).
          if (i == 0) {
            jac.at(a, a) += dt * 2.0 * ih2;
            jac.at(a, node(1)) -= dt * 2.0 * ih2;
          } else if (i == ax.n - 1) {
            jac.at(a, a) += dt * 2.0 * ih2;
            jac.at(a, node(ax.n - 2)) -= dt * 2.0 * ih2;
          } else {
            jac.at(a, a) += dt * 2.0 * ih2;
            jac.at(a, node(i - 1)) -= dt * ih2;
            jac.at(a, node(i + 1)) -= dt * ih2;
          }
          // Gradient-square row: -2*dt*(grad tau)_axis * d(grad tau)_axis.
          const double gval = grad.at(a, axis);
          const double f = -2.0 * dt * gval;
          if (i == 0) {
            jac.at(a, a) += -f * ih;
            jac.at(a, node(1)) += f * ih;
          } else if (i == ax.n - 1) {
            jac.at(a, a) += f * ih;
            jac.at(a, node(ax.n - 2)) += -f * ih;
          } else {
            jac.at(a, node(i + 1)) += f * 0.5 * ih;
            jac.at(a, node(i - 1)) += -f * 0.5 * ih;
          }
        }
      }
    }
  };

  std::vector<double> tau0(n);
  for (int i = 0; i < n; ++i) tau0[i] = std::log(s.theta.values[i]);
  std::vector<double> tau_new = newton_solve(prob, std::move(tau0), g, cfg);
  Field out = Field::scalar(g);
  for (int i = 0; i < n; ++i) out.values[i] = std::exp(tau_new[i]);
  return out;
}

SimState coupled_step(const SimState& s, const SolverConfig& cfg,
                      const ConstitutiveParams& p, const Forcing* forcing) {
  const double dt = cfg.dt;
  SimState out;
  out.t = s.t + dt;

  if (cfg.coupling == Coupling::Splitting) {
    auto [u1, v1] = momentum_step(s, s.theta, dt, p, forcing);
    if (cfg.heat_formulation == HeatForm::Temperature) {
      out.theta = heat_step(s, divergence(v1), dt, p, cfg, forcing);
    } else {
      out.theta = heat_step_log(s, u1, dt, p, cfg, forcing);
    }
    out.u = std::move(u1);
    out.v = std::move(v1);
    return out;
  }

  // Picard: iterate momentum (half-time temperature) and heat (latest
  // velocity divergence) to a fixed point in the max norm of theta.
  Field theta_k = s.theta;
  double delta = 0.0;
  for (int it = 0; it < cfg.picard_max_iters; ++it) {
    Field theta_half = s.theta;
    for (size_t i = 0; i < theta_half.values.size(); ++i)
      theta_half.values[i] =
          0.5 * (s.theta.values[i] + theta_k.values[i]);
    auto [u1, v1] = momentum_step(s, theta_half, dt, p, forcing);
    Field theta_next =
        cfg.heat_formulation == HeatForm::Temperature
            ? heat_step(s, divergence(v1), dt, p, cfg, forcing)
            : heat_step_log(s, u1, dt, p, cfg, forcing);
    delta = 0.0;
    for (size_t i = 0; i < theta_next.values.size(); ++i)
      delta = std::max(delta,
                       std::abs(theta_next.values[i] - theta_k.values[i]));
    theta_k = std::move(theta_next);
    if (delta <= cfg.picard_tol) {
      out.u = std::move(u1);
      out.v = std::move(v1);
      out.theta = std::move(theta_k);
      return out;
    }
  }
  throw PicardDivergence(delta, cfg.picard_max_iters);
}

RunResult run(const InitialData& init, const SolverConfig& cfg,
              const ConstitutiveParams& p, const RunSinks& sinks,
              const Forcing* forcing) {
  init.validate();
  cfg.validate();
  p.validate();
  if (sinks.ledger_stride < 1 || sinks.state_stride < 1)
    throw std::invalid_argument("run: strides must be >= 1");

  // Fixed-dt schedule; a shorter final step lands exactly on t_end.
  long long nsteps = std::llround(cfg.t_end / cfg.dt);
  double last_dt = cfg.t_end - (nsteps - 1) * cfg.dt;
  if (cfg.t_end == 0.0) {
    nsteps = 0;
    last_dt = 0.0;
  } else if (nsteps < 1 || last_dt <= 0.0 ||
             std::abs(nsteps * cfg.dt - cfg.t_end) >
                 1e-9 * std::max(1.0, cfg.t_end)) {
    nsteps = static_cast<long long>(cfg.t_end / cfg.dt) + 1;
    last_dt = cfg.t_end - (nsteps - 1) * cfg.dt;
    if (last_dt <= 0.0) {
      --nsteps;
      last_dt = cfg.dt;
    }
  }

  SimState state;
  state.t = 0.0;
  state.u = init.u0;
  state.v = init.v0;
  state.theta = init.theta0;

  RunResult res;
  BalanceAccumulator acc(state, p);

  auto record_diag = [&](const SimState& s) {
    const Field dv = divergence(s.v);
    res.diag.t.push_back(s.t);
    res.diag.a_inf.push_back(p.mu * max_abs(dv));
    res.diag.div_v_min.push_back(field_min(dv));
    res.diag.div_v_max.push_back(field_max(dv));
  };

  res.theta_min_overall = field_min(state.theta);
  record_diag(state);
  res.ledger.push_back(acc.initial_row());
  if (sinks.on_ledger) sinks.on_ledger(res.ledger.back());
  if (sinks.store_states) res.states.push_back(state);
  if (sinks.on_state) sinks.on_state(state, 0);

  for (long long k = 1; k <= nsteps; ++k) {
    SolverConfig step_cfg = cfg;
    if (k == nsteps) step_cfg.dt = last_dt;
    state = coupled_step(state, step_cfg, p, forcing);
    state.t = (k == nsteps) ? cfg.t_end : k * cfg.dt;

    res.theta_min_overall =
        std::min(res.theta_min_overall, field_min(state.theta));
    record_diag(state);
    const BalanceRow row = acc.update(state, step_cfg.dt);
    const bool last = (k == nsteps);
    if (last || k % sinks.ledger_stride == 0) {
      res.ledger.push_back(row);
      if (sinks.on_ledger) sinks.on_ledger(row);
    }
    if (last || k % sinks.state_stride == 0) {
      if (sinks.store_states) res.states.push_back(state);
      if (sinks.on_state) sinks.on_state(state, static_cast<int>(k));
    }
  }

  res.final_state = std::move(state);
  res.steps = static_cast<int>(nsteps);
  return res;
}

}  // namespace tesim
