#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tesim {

/// Thermal constitutive model family.
///
/// LinearCV is kept as a distinct case rather than the alpha->1 limit of
/// PowerLaw: the entropy coefficient alpha/(alpha-1) is singular at alpha=1,
/// so the two models use separate closed forms.
enum class Model { LinearCV, PowerLaw };

/// Material parameters shared by every module.
///
///   mu    > 0   thermo-mechanical coupling strength
///   alpha > 1   internal-energy exponent      (PowerLaw only)
///   beta  > 0   conductivity exponent         (PowerLaw only)
///   delta >= 0  strength of the theta^2 sink / theta^-2 source regularization
///   omega > 0   mollification width for the smoothed evaluators
struct ConstitutiveParams {
  Model model = Model::LinearCV;
  double mu = 1.0;
  double alpha = 2.0;
  double beta = 2.0;
  double delta = 0.0;
  double omega = 0.1;

  /// Collect every constraint violation (empty result == valid).
  std::vector<std::string> violations() const;
  /// Throw std::invalid_argument listing all violations, if any.
  void validate() const;
};

/// Factory that rejects invalid parameters at construction.
ConstitutiveParams make_params(Model model, double mu, double alpha,
                               double beta, double delta = 0.0,
                               double omega = 0.1);

// Pointwise thermal functions.  All of them require theta > 0 and throw
// std::domain_error with the offending value otherwise.

/// e1(theta): theta (LinearCV) or theta + theta^alpha (PowerLaw).
double internal_energy(const ConstitutiveParams& p, double theta);

/// s1(theta): ln(theta) (LinearCV) or
/// ln(theta) + alpha/(alpha-1) * theta^(alpha-1) (PowerLaw).
double entropy(const ConstitutiveParams& p, double theta);

/// cV(theta) = e1'(theta): 1 or 1 + alpha*theta^(alpha-1).
double heat_capacity(const ConstitutiveParams& p, double theta);

/// kappa(theta): 1 or 1 + theta^beta.
double conductivity(const ConstitutiveParams& p, double theta);

/// K(theta) = int_0^theta kappa: theta or theta + theta^(beta+1)/(beta+1).
double conductivity_primitive(const ConstitutiveParams& p, double theta);

/// Helmholtz-type functional H_ref(theta) = e1(theta) - theta_ref*s1(theta).
/// Minimized over theta exactly at theta == theta_ref.
double helmholtz(const ConstitutiveParams& p, double theta, double theta_ref);

// Mollified evaluators.  These smooth the constitutive nonlinearities so that
// they are globally Lipschitz in their argument; they are defined for every
// real theta and converge to the sharp functions as omega -> 0.

/// f_omega(x) = sqrt(x^2+omega^2) / (1 + omega*sqrt(x^2+omega^2)).
/// Bounds: omega/(1+omega^2) <= f_omega < 1/omega, |f_omega'| < 1.
double mollifier(double omega, double x);

/// Smoothed power <x>_omega^s = (x^2 + omega^2)^(s/2).
double smoothed_power(double omega, double x, double s);

/// Number of Simpson panels used by the mollified integrals by default.
inline constexpr int kMollifiedPanels = 1 << 10;

/// e_omega(theta) = int_0^theta f_omega(1 + alpha*<x>_omega^(alpha-1)) dx,
/// evaluated with composite Simpson quadrature (`panels` subintervals).
double mollified_energy(const ConstitutiveParams& p, double theta,
                        int panels = kMollifiedPanels);

/// K_omega(theta) = int_0^theta f_omega(1 + <x>_omega^beta) dx.
double mollified_primitive(const ConstitutiveParams& p, double theta,
                           int panels = kMollifiedPanels);

/// Result of the Gibbs-relation self test.
struct GibbsReport {
  bool pass = false;
  double max_violation = 0.0;  // worst |theta*s1'(theta) - cV(theta)| seen
  double tol = 0.0;
};

/// Verify theta * s1'(theta) == e1'(theta) on a log-spaced sample grid in
/// [theta_lo, theta_hi], with s1' and e1' taken by central finite differences
/// of the model functions and compared against the analytic heat capacity.
GibbsReport check_gibbs(const ConstitutiveParams& p, double theta_lo,
                        double theta_hi, double tol = 1e-6, int samples = 256);

/// Same check against caller-supplied e1/s1/cV (used for negative controls).
GibbsReport check_gibbs_with(double (*e1)(double, const void*),
                             double (*s1)(double, const void*),
                             double (*cv)(double, const void*), const void* ctx,
                             double theta_lo, double theta_hi, double tol,
                             int samples);

/// Result of the structural stability checks.
struct StabilityReport {
  bool pass = false;
  bool e1_positive = false;       // e1 > 0 on (0, inf)
  bool cv_positive = false;       // e1' > 0 on (0, inf)
  bool entropy_unbounded = false; // s1 -> -inf as theta -> 0+
  bool coupling_bound = false;    // e2 - c1*s2 >= c2 certified
  double c1 = 0.0;
  double c2 = 0.0;  // for the requested dimension
  int dim = 0;
};

/// Check the structural conditions behind the energy/entropy framework:
/// positivity of e1 and cV, entropy blow-up at theta -> 0+, and the
/// mechanical coupling bound 0.5*|F|^2 - c1*mu*tr(F) >= -c1^2*mu^2*dim/2
/// (exact by completing the square, reported with c1 = 1).
StabilityReport check_stability(const ConstitutiveParams& p, int dim = 3);

}  // namespace tesim
