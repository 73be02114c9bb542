#pragma once

#include <string>
#include <vector>

#include "tesim/constitutive.hpp"
#include "tesim/grid.hpp"

namespace tesim {

struct SimState;  // defined in solver.hpp

/// One row of the balance ledger.  Serialized to CSV in exactly this field
/// order (header row mandatory).
struct BalanceRow {
  double t = 0.0;
  double kinetic = 0.0;        // 0.5 * int |u_t|^2
  double elastic = 0.0;        // 0.5 * int |grad u|^2 (face-difference form)
  double thermal = 0.0;        // int e1(theta)
  double entropy_total = 0.0;  // int s1(theta) + mu * int div u
  double dissipation_cum = 0.0;     // int_0^t int kappa*|grad theta|^2/theta^2
  double delta_sq_cum = 0.0;        // delta * int_0^t int theta^2
  double delta_inv_sq_cum = 0.0;    // delta * int_0^t int theta^-2
  double energy_residual = 0.0;
  double dissipation_residual = 0.0;
  double min_theta = 0.0;
  double max_theta = 0.0;
};

/// CSV header matching the BalanceRow field order.
std::string balance_csv_header();
/// One CSV line (round-trippable %.17g formatting, no trailing newline).
std::string balance_csv_line(const BalanceRow& row);

/// Pointwise entropy production kappa(theta) |grad theta|^2 / theta^2.
/// Nonnegative by construction.
Field entropy_production_field(const Field& theta,
                               const ConstitutiveParams& p);

/// Running balance bookkeeping.  Time integrals are accumulated with the
/// same backward-Euler rule as the stepper (each dt weighted at the new
/// state), so the residuals measure scheme consistency rather than
/// quadrature mismatch.
///
/// The energy residual follows the total energy balance
///   [thermal + kinetic + elastic + delta*cum(theta^2)](t)
///     - [same](0) - delta*cum(theta^-2)(t),
/// and the dissipation residual the total dissipation balance
///   [thermal - entropy_total + kinetic + elastic + dissipation_cum
///     + delta*cum(theta^2 + theta^-3)](t)
///     - [same](0) - delta*cum(theta + theta^-2)(t).
class BalanceAccumulator {
 public:
  BalanceAccumulator(const SimState& initial, const ConstitutiveParams& p);

  /// Advance the cumulative integrals by one step ending at `s` and return
  /// the ledger row at s.t.
  BalanceRow update(const SimState& s, double dt);

  /// Row for the initial state (all cumulative terms zero).
  const BalanceRow& initial_row() const { return first_; }

  /// Initial energy total (denominator of relative energy residuals).
  double initial_energy() const { return e0_; }
  /// Initial Helmholtz-type total (denominator for dissipation residuals).
  double initial_helmholtz() const { return h0_; }

 private:
  ConstitutiveParams p_;
  BalanceRow first_;
  double e0_ = 0.0;  // thermal + kinetic + elastic at t=0
  double h0_ = 0.0;  // thermal - entropy_total + kinetic + elastic at t=0
  double dissipation_cum_ = 0.0;
  double d_sq_ = 0.0;       // delta * cum theta^2
  double d_inv_sq_ = 0.0;   // delta * cum theta^-2
  double d_lin_ = 0.0;      // delta * cum theta
  double d_inv_cube_ = 0.0; // delta * cum theta^-3

  BalanceRow instantaneous(const SimState& s) const;
};

/// Lower temperature envelope exp(-int_0^t ||a||_inf) * theta0_min for the
/// damped heat flow theta_t - lap theta = -a*theta; `a_inf[k]` is
/// ||a(times[k])||_inf and the integral is taken by the trapezoid rule.
std::vector<double> min_temperature_bound(double theta0_min,
                                          const std::vector<double>& times,
                                          const std::vector<double>& a_inf);

/// Truncation tail mass int |min(theta,k) - theta|^s dx (k > 0, s >= 0).
double tail_mass(const Field& theta, double k, double s);

/// Constant sub/super solutions bracketing the temperature when delta > 0.
/// With a = mu * div(u_t) ranging over [a_min, a_max], bisection solves
///   lower: a_max * x + delta * (x^2 - x^-2) = 0,
///   upper: a_min * x + delta * (x^2 - x^-2) = 0,
/// and the bracket is [min(lower, theta0_min), max(upper, theta0_max)].
struct ComparisonBracket {
  double lower = 0.0;
  double upper = 0.0;
};

ComparisonBracket comparison_bracket(double theta0_min, double theta0_max,
                                     double a_min, double a_max, double delta);

/// Where entropy production concentrates.
struct DefectIndicator {
  double ratio = 0.0;  // max_i w_i p_i / sum_i w_i p_i (0 if total == 0)
  int argmax_node = -1;
};

DefectIndicator defect_indicator(const Field& production);

}  // namespace tesim
