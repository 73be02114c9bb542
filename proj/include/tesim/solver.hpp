#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tesim/balance.hpp"
#include "tesim/constitutive.hpp"
#include "tesim/grid.hpp"

namespace tesim {

/// How the momentum and heat updates are coupled within one step.
enum class Coupling { Splitting, Picard };

/// Which unknown the implicit heat update solves for.
/// LogTemperature integrates ln(theta) and is available for LinearCV only;
/// it keeps theta positive by construction.
enum class HeatForm { Temperature, LogTemperature };

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Coupling coupling = Coupling::Splitting;
  HeatForm heat_formulation = HeatForm::Temperature;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  double newton_tol = 1e-11;
  int newton_max_iters = 30;

  std::vector<std::string> violations() const;
  void validate() const;
};

/// Simulation state: displacement u and velocity v (zero on the boundary),
/// temperature theta (> 0 everywhere).
struct SimState {
  double t = 0.0;
  Field u, v, theta;
};

struct InitialData {
  Field u0, v0, theta0;
  /// Check positivity of theta0 and homogeneous boundary values of u0/v0.
  void validate() const;
};

// Solver failure modes.

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Newton iteration exceeded its cap; carries the last residual norm.
struct NewtonDivergence : SolverError {
  NewtonDivergence(double r, int it);
  double last_residual;
  int iters;
};

/// The positivity line search could not produce a positive temperature.
struct PositivityLoss : SolverError {
  explicit PositivityLoss(double worst);
  double worst_theta;
};

/// Picard coupling iteration exceeded its cap.
struct PicardDivergence : SolverError {
  PicardDivergence(double d, int it);
  double last_delta;
  int iters;
};

/// Manufactured-solution forcing appended to the two equations; evaluated
/// pointwise at (t, x, y).  `momentum` feeds component `comp` of the wave
/// update, `heat` the internal-energy update.
struct Forcing {
  std::function<double(double t, double x, double y, int comp)> momentum;
  std::function<double(double t, double x, double y)> heat;
};

/// One leapfrog (velocity-Verlet) update of u_tt = lap(u) - mu*grad(theta):
/// half kick, full drift, half kick, with the temperature source frozen at
/// `theta_source` (the half-time temperature) for both kicks.  Returns the
/// updated displacement and velocity; boundary values stay zero.
std::pair<Field, Field> momentum_step(const SimState& s,
                                      const Field& theta_source, double dt,
                                      const ConstitutiveParams& p,
                                      const Forcing* forcing = nullptr);

/// One backward-Euler update of the internal-energy balance
///   e1(theta_new) - e1(theta_old) =
///     dt * [ div(kappa(theta_new) grad theta_new) - mu*theta_new*div_vt
///            - delta*theta_new^2 + delta*theta_new^-2 + g ],
/// solved by Newton iteration with a positivity line search.
Field heat_step(const SimState& s, const Field& div_vt, double dt,
                const ConstitutiveParams& p, const SolverConfig& cfg,
                const Forcing* forcing = nullptr);

/// Backward-Euler update of tau = ln(theta) for LinearCV:
///   tau_new - tau_old + mu*(div u_new - div u_old)
///     = dt * [ lap(tau_new) + |grad tau_new|^2 + g*exp(-tau_new) ].
/// Positivity of theta = exp(tau) is structural.  Throws
/// std::invalid_argument for PowerLaw parameters.
Field heat_step_log(const SimState& s, const Field& u_new, double dt,
                    const ConstitutiveParams& p, const SolverConfig& cfg,
                    const Forcing* forcing = nullptr);

/// One coupled step.  Splitting: momentum with frozen theta, then heat with
/// the updated velocity divergence.  Picard: iterate (momentum with the
/// half-time temperature, heat with the latest velocity) to a fixed point in
/// the max norm of theta.
SimState coupled_step(const SimState& s, const SolverConfig& cfg,
                      const ConstitutiveParams& p,
                      const Forcing* forcing = nullptr);

/// Observation hooks and retention policy for `run`.
struct RunSinks {
  int ledger_stride = 1;  // emit a balance row every k-th step (>=1)
  int state_stride = 1;   // record / report states every k-th step (>=1)
  bool store_states = true;
  std::function<void(const BalanceRow&)> on_ledger;
  std::function<void(const SimState&, int step)> on_state;
};

/// Per-step scalar diagnostics (index 0 is the initial state).
struct StepDiagnostics {
  std::vector<double> t;
  std::vector<double> a_inf;       // || mu * div v ||_inf
  std::vector<double> div_v_min;   // min over nodes of div v
  std::vector<double> div_v_max;
};

struct RunResult {
  SimState final_state;
  std::vector<SimState> states;   // recorded at state_stride (incl. first/last)
  std::vector<BalanceRow> ledger; // rows at ledger_stride (incl. first/last)
  StepDiagnostics diag;
  double theta_min_overall = 0.0;
  int steps = 0;
};

/// Advance from t=0 to t_end with fixed dt, accumulating the balance ledger
/// every step and emitting rows/states per `sinks`.
RunResult run(const InitialData& init, const SolverConfig& cfg,
              const ConstitutiveParams& p, const RunSinks& sinks = {},
              const Forcing* forcing = nullptr);

}  // namespace tesim
