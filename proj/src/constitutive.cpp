#include "tesim/constitutive.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace tesim {

namespace {

[[noreturn]] void throw_nonpositive(const char* fn, double theta) {
  std::ostringstream os;
  os << fn << ": theta must be > 0, got " << theta;
  throw std::domain_error(os.str());
}

void require_positive(const char* fn, double theta) {
  if (!(theta > 0.0)) throw_nonpositive(fn, theta);  // catches NaN too
}

// Composite Simpson rule with n (even) subintervals; signed in b-a.
template <class F>
double simpson(const F& f, double a, double b, int n) {
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

std::vector<std::string> ConstitutiveParams::violations() const {
  std::vector<std::string> out;
  if (!(mu > 0.0)) out.push_back("mu: must be > 0");
  if (model == Model::PowerLaw) {
    if (!(alpha > 1.0)) out.push_back("alpha: must be > 1 for PowerLaw");
    if (!(beta > 0.0)) out.push_back("beta: must be > 0 for PowerLaw");
  }
  if (!(delta >= 0.0)) out.push_back("delta: must be >= 0");
  if (!(omega > 0.0)) out.push_back("omega: must be > 0");
  return out;
}

void ConstitutiveParams::validate() const {
  const auto bad = violations();
  if (bad.empty()) return;
  std::string msg = "invalid constitutive parameters:";
  for (const auto& b : bad) msg += " [" + b + "]";
  throw std::invalid_argument(msg);
}

ConstitutiveParams make_params(Model model, double mu, double alpha,
                               double beta, double delta, double omega) {
  ConstitutiveParams p;
  p.model = model;
  p.mu = mu;
  p.alpha = alpha;
  p.beta = beta;
  p.delta = delta;
  p.omega = omega;
  p.validate();
  return p;
}

double internal_energy(const ConstitutiveParams& p, double theta) {
  require_positive("internal_energy", theta);
  if (p.model == Model::LinearCV) return theta;
  return theta + std::pow(theta, p.alpha);
}

double entropy(const ConstitutiveParams& p, double theta) {
  require_positive("entropy", theta);
  if (p.model == Model::LinearCV) return std::log(theta);
  return std::log(theta) +
         p.alpha / (p.alpha - 1.0) * std::pow(theta, p.alpha - 1.0);
}

double heat_capacity(const ConstitutiveParams& p, double theta) {
  require_positive("heat_capacity", theta);
  if (p.model == Model::LinearCV) return 1.0;
  return 1.0 + p.alpha * std::pow(theta, p.alpha - 1.0);
}

double conductivity(const ConstitutiveParams& p, double theta) {
  require_positive("conductivity", theta);
  if (p.model == Model::LinearCV) return 1.0;
  return 1.0 + std::pow(theta, p.beta);
}

double conductivity_primitive(const ConstitutiveParams& p, double theta) {
  require_positive("conductivity_primitive", theta);
  if (p.model == Model::LinearCV) return theta;
  return theta + std::pow(theta, p.beta + 1.0) / (p.beta + 1.0);
}

double helmholtz(const ConstitutiveParams& p, double theta, double theta_ref) {
  require_positive("helmholtz", theta);
  if (!(theta_ref > 0.0)) throw_nonpositive("helmholtz (reference)", theta_ref);
  return internal_energy(p, theta) - theta_ref * entropy(p, theta);
}

double mollifier(double omega, double x) {
  if (!(omega > 0.0))
    throw std::invalid_argument("mollifier: omega must be > 0");
  const double r = std::sqrt(x * x + omega * omega);
  return r / (1.0 + omega * r);
}

double smoothed_power(double omega, double x, double s) {
  if (!(omega > 0.0))
    throw std::invalid_argument("smoothed_power: omega must be > 0");
  return std::pow(x * x + omega * omega, 0.5 * s);
}

double mollified_energy(const ConstitutiveParams& p, double theta,
                        int panels) {
  const double om = p.omega;
  if (!(om > 0.0))
    throw std::invalid_argument("mollified_energy: omega must be > 0");
  if (theta == 0.0) return 0.0;
  if (p.model == Model::LinearCV) return theta * mollifier(om, 1.0);
  const double a = p.alpha;
  auto integrand = [&](double x) {
    return mollifier(om, 1.0 + a * smoothed_power(om, x, a - 1.0));
  };
  return simpson(integrand, 0.0, theta, panels);
}

double mollified_primitive(const ConstitutiveParams& p, double theta,
                           int panels) {
  const double om = p.omega;
  if (!(om > 0.0))
    throw std::invalid_argument("mollified_primitive: omega must be > 0");
  if (theta == 0.0) return 0.0;
  if (p.model == Model::LinearCV) return theta * mollifier(om, 1.0);
  const double b = p.beta;
  auto integrand = [&](double x) {
    return mollifier(om, 1.0 + smoothed_power(om, x, b));
  };
  return simpson(integrand, 0.0, theta, panels);
}

namespace {

// Central finite difference with a relative step.
template <class F>
double central_diff(const F& f, double x) {
  const double h = x * 1e-6;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

GibbsReport gibbs_scan(const std::function<double(double)>& e1,
                       const std::function<double(double)>& s1,
                       const std::function<double(double)>& cv,
                       double theta_lo, double theta_hi, double tol,
                       int samples) {
  if (!(theta_lo > 0.0) || !(theta_hi > theta_lo))
    throw std::invalid_argument("check_gibbs: need 0 < theta_lo < theta_hi");
  if (samples < 2) samples = 2;
  GibbsReport rep;
  rep.tol = tol;
  const double llo = std::log(theta_lo), lhi = std::log(theta_hi);
  for (int i = 0; i < samples; ++i) {
    const double theta = std::exp(llo + (lhi - llo) * i / (samples - 1));
    // Gibbs relation theta*s1' == e1', with the derivative of the energy
    // cross-checked against its analytic form cV.
    const double v1 = std::abs(theta * central_diff(s1, theta) - cv(theta));
    const double v2 = std::abs(central_diff(e1, theta) - cv(theta));
    rep.max_violation = std::max(rep.max_violation, std::max(v1, v2));
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

}  // namespace

GibbsReport check_gibbs(const ConstitutiveParams& p, double theta_lo,
                        double theta_hi, double tol, int samples) {
  p.validate();
  return gibbs_scan([&](double t) { return internal_energy(p, t); },
                    [&](double t) { return entropy(p, t); },
                    [&](double t) { return heat_capacity(p, t); }, theta_lo,
                    theta_hi, tol, samples);
}

GibbsReport check_gibbs_with(double (*e1)(double, const void*),
                             double (*s1)(double, const void*),
                             double (*cv)(double, const void*), const void* ctx,
                             double theta_lo, double theta_hi, double tol,
                             int samples) {
  return gibbs_scan([=](double t) { return e1(t, ctx); },
                    [=](double t) { return s1(t, ctx); },
                    [=](double t) { return cv(t, ctx); }, theta_lo, theta_hi,
                    tol, samples);
}

StabilityReport check_stability(const ConstitutiveParams& p, int dim) {
  p.validate();
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("check_stability: dim must be 1, 2 or 3");
  StabilityReport rep;
  rep.dim = dim;

  // Positivity of e1 and cV on a wide log-spaced sample set.
  rep.e1_positive = true;
  rep.cv_positive = true;
  for (int i = -12; i <= 12; ++i) {
    const double theta = std::pow(10.0, i * 0.5);
    if (!(internal_energy(p, theta) > 0.0)) rep.e1_positive = false;
    if (!(heat_capacity(p, theta) > 0.0)) rep.cv_positive = false;
  }

  // s1 -> -inf as theta -> 0+: strictly decreasing and unbounded below along
  // theta = 10^-j.  (Both models carry the ln(theta) term, which dominates.)
  rep.entropy_unbounded = true;
  double prev = entropy(p, 1.0);
  for (int j = 1; j <= 12; ++j) {
    const double s = entropy(p, std::pow(10.0, -j));
    if (!(s < prev - 1.0)) rep.entropy_unbounded = false;
    prev = s;
  }
  if (entropy(p, 1e-12) > -20.0) rep.entropy_unbounded = false;

  // Coupling bound: 0.5*|F|^2 - c1*mu*tr(F) >= -c1^2*mu^2*dim/2 with
  // equality at F = c1*mu*I; exact for any c1 by completing the square.
  rep.c1 = 1.0;
  rep.c2 = -rep.c1 * rep.c1 * p.mu * p.mu * dim / 2.0;
  rep.coupling_bound = true;

  rep.pass = rep.e1_positive && rep.cv_positive && rep.entropy_unbounded &&
             rep.coupling_bound;
  return rep;
}

}  // namespace tesim
