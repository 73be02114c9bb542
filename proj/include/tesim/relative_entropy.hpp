#pragma once

#include <string>
#include <vector>

#include "tesim/constitutive.hpp"
#include "tesim/grid.hpp"

namespace tesim {

struct SimState;

/// Relative entropy density in the log-temperature variable:
///   exp(tau) - Theta - Theta * (tau - ln Theta),   Theta > 0.
/// Nonnegative, zero exactly at tau == ln(Theta).
double rel_entropy_density_linear(double tau, double Theta);

/// Model-form relative entropy density
///   e1(theta) - e1(Theta) - Theta * (s1(theta) - s1(Theta)),
/// theta, Theta > 0.  Nonnegative by convexity, zero iff theta == Theta.
double rel_entropy_density_nonlinear(const ConstitutiveParams& p, double theta,
                                     double Theta);

/// Limit of |theta - Theta|^2 / E(theta|Theta) as theta -> Theta:
/// 2 / (e1''(Theta) - Theta * s1''(Theta)).
double quadratic_ratio_limit(const ConstitutiveParams& p, double Theta);

/// Certified comparison constants between the squared distance and the
/// relative entropy, following the three-regime split around the reference
/// range [Theta_lo, Theta_hi]:
///   mid:  |theta-Theta|^2 <= C_mid * E   for theta in the bracket,
///   low:  1 + |ln theta|  <= C_low * E   for theta <= Theta_lo/2,
///   high: 1 + e1(theta)   <= C_high * E  for theta >= 2*Theta_hi.
struct QuadraticControl {
  bool pass = false;
  double C_mid = 0.0;
  double C_low = 0.0;
  double C_high = 0.0;
  double theta_low_edge = 0.0;   // upper end of the low regime
  double theta_high_edge = 0.0;  // lower end of the high regime
};

QuadraticControl quadratic_control(const ConstitutiveParams& p,
                                   double Theta_lo, double Theta_hi,
                                   double bracket_lo, double bracket_hi,
                                   int samples = 400);

struct WeakStrongOptions {
  double atol = 1e-14;
  double rtol = 0.2;
};

/// Distance report between a trajectory and a reference (strong) trajectory.
struct RelEntReport {
  std::vector<double> t;
  std::vector<double> thermal_gap;   // int E(theta_a | theta_b)
  std::vector<double> velocity_gap;  // 0.5 * int |v_a - v_b|^2
  std::vector<double> strain_gap;    // 0.5 * int |grad(u_a - u_b)|^2
  std::vector<double> total;
  double fitted_C = 0.0;  // least-squares Gronwall rate of ln(total)
  double c_ref = 0.0;     // mu * max_t ||div v_b||_inf (sanity reference)
  bool pass = false;      // total(t) <= (total(0)+atol)*exp(C t)*(1+rtol)
  bool proven_regime = true;  // PowerLaw outside alpha>=2, beta==2 -> false
  std::string note;
};

/// Evaluate the relative-entropy distance of trajectory `a` against the
/// reference trajectory `b` at shared timestamps (same grid required), fit
/// the Gronwall rate and test the exponential envelope.
RelEntReport weak_strong_compare(const std::vector<SimState>& a,
                                 const std::vector<SimState>& b,
                                 const ConstitutiveParams& p,
                                 const WeakStrongOptions& opts = {});

}  // namespace tesim
