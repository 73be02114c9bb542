#include "tesim/relative_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tesim/grid_ops.hpp"
#include "tesim/solver.hpp"

namespace tesim {

double rel_entropy_density_linear(double tau, double Theta) {
  if (!(Theta > 0.0))
    throw std::domain_error("rel_entropy_density_linear: Theta <= 0");
  return std::exp(tau) - Theta - Theta * (tau - std::log(Theta));
}

double rel_entropy_density_nonlinear(const ConstitutiveParams& p, double theta,
                                     double Theta) {
  return internal_energy(p, theta) - internal_energy(p, Theta) -
         Theta * (entropy(p, theta) - entropy(p, Theta));
}

double quadratic_ratio_limit(const ConstitutiveParams& p, double Theta) {
  if (!(Theta > 0.0))
    throw std::domain_error("quadratic_ratio_limit: Theta <= 0");
  // e1'' - Theta*s1'': LinearCV gives 1/Theta; PowerLaw adds
  // alpha(alpha-1)Theta^(alpha-2) - alpha(alpha-2)Theta^(alpha-2)
  //   = alpha*Theta^(alpha-2).
  double denom = 1.0 / Theta;
  if (p.model == Model::PowerLaw)
    denom += p.alpha * std::pow(Theta, p.alpha - 2.0);
  return 2.0 / denom;
}

QuadraticControl quadratic_control(const ConstitutiveParams& p,
                                   double Theta_lo, double Theta_hi,
                                   double bracket_lo, double bracket_hi,
                                   int samples) {
  p.validate();
  if (!(Theta_lo > 0.0) || !(Theta_hi >= Theta_lo))
    throw std::invalid_argument("quadratic_control: bad Theta range");
  if (!(bracket_lo > 0.0) || !(bracket_hi >= bracket_lo))
    throw std::invalid_argument("quadratic_control: bad bracket");
  if (samples < 2) samples = 2;

  QuadraticControl qc;
  qc.theta_low_edge = 0.5 * Theta_lo;
  qc.theta_high_edge = 2.0 * Theta_hi;

  auto log_grid = [&](double lo, double hi, int n) {
    std::vector<double> v(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
      v[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return v;
  };

  const auto Thetas = log_grid(Theta_lo, Theta_hi, samples);
  bool nonneg = true;

  // Mid regime: sup |theta-Theta|^2 / E over the bracket, with the analytic
  // second-derivative limit on the diagonal.
  {
    const auto thetas = log_grid(bracket_lo, bracket_hi, samples);
    for (double Theta : Thetas) {
      qc.C_mid = std::max(qc.C_mid, quadratic_ratio_limit(p, Theta));
      for (double theta : thetas) {
        const double ent = rel_entropy_density_nonlinear(p, theta, Theta);
        if (ent < 0.0) nonneg = false;
        const double d2 = (theta - Theta) * (theta - Theta);
        if (d2 == 0.0) continue;
        if (!(ent > 0.0)) {
          nonneg = false;
          continue;
        }
        qc.C_mid = std::max(qc.C_mid, d2 / ent);
      }
    }
  }

  // Low regime (0, Theta_lo/2]: control of 1 + |ln theta|.
  {
    const auto thetas = log_grid(1e-9, qc.theta_low_edge, samples);
    for (double Theta : Thetas)
      for (double theta : thetas) {
        const double ent = rel_entropy_density_nonlinear(p, theta, Theta);
        if (!(ent > 0.0)) {
          nonneg = false;
          continue;
        }
        qc.C_low =
            std::max(qc.C_low, (1.0 + std::abs(std::log(theta))) / ent);
      }
  }

  // High regime [2*Theta_hi, inf): control of 1 + e1(theta).
  {
    const auto thetas = log_grid(qc.theta_high_edge, 1e7, samples);
    for (double Theta : Thetas)
      for (double theta : thetas) {
        const double ent = rel_entropy_density_nonlinear(p, theta, Theta);
        if (!(ent > 0.0)) {
          nonneg = false;
          continue;
        }
        qc.C_high =
            std::max(qc.C_high, (1.0 + internal_energy(p, theta)) / ent);
      }
  }

  qc.pass = nonneg && std::isfinite(qc.C_mid) && std::isfinite(qc.C_low) &&
            std::isfinite(qc.C_high) && qc.C_mid > 0.0 && qc.C_low > 0.0 &&
            qc.C_high > 0.0;
  return qc;
}

RelEntReport weak_strong_compare(const std::vector<SimState>& a,
                                 const std::vector<SimState>& b,
                                 const ConstitutiveParams& p,
                                 const WeakStrongOptions& opts) {
  p.validate();
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument(
        "weak_strong_compare: trajectories must share their timestamps");

  RelEntReport rep;
  if (p.model == Model::PowerLaw && !(p.alpha >= 2.0 && p.beta == 2.0)) {
    rep.proven_regime = false;
    rep.note = "outside proven regime (requires alpha >= 2 and beta == 2)";
  }

  const size_t m = a.size();
  for (size_t k = 0; k < m; ++k) {
    require_same_grid(a[k].theta, b[k].theta, "weak_strong_compare");
    if (std::abs(a[k].t - b[k].t) >
        1e-12 * std::max(1.0, std::abs(b[k].t)))
      throw std::invalid_argument(
          "weak_strong_compare: timestamp mismatch between trajectories");

    const Grid& g = a[k].theta.grid;
    Field ent = Field::scalar(g);
    for (int i = 0; i < g.node_count(); ++i) {
      const double th = a[k].theta.at(i);
      const double Th = b[k].theta.at(i);
      ent.at(i) = p.model == Model::LinearCV
                      ? rel_entropy_density_linear(std::log(th), Th)
                      : rel_entropy_density_nonlinear(p, th, Th);
    }
    Field dv(g, a[k].v.components), du(g, a[k].u.components);
    for (size_t i = 0; i < dv.values.size(); ++i) {
      dv.values[i] = a[k].v.values[i] - b[k].v.values[i];
      du.values[i] = a[k].u.values[i] - b[k].u.values[i];
    }
    rep.t.push_back(a[k].t);
    rep.thermal_gap.push_back(integrate(ent));
    rep.velocity_gap.push_back(0.5 * inner(dv, dv));
    rep.strain_gap.push_back(elastic_energy(du));
    rep.total.push_back(rep.thermal_gap.back() + rep.velocity_gap.back() +
                        rep.strain_gap.back());

    rep.c_ref = std::max(rep.c_ref, p.mu * max_abs(divergence(b[k].v)));
  }

  // Least-squares fit of ln(total) ~ C*t + const over strictly positive
  // samples; a flat-zero distance gets C = 0.
  {
    double st = 0, sy = 0, stt = 0, sty = 0;
    int n = 0;
    for (size_t k = 0; k < m; ++k) {
      if (!(rep.total[k] > 0.0)) continue;
      const double y = std::log(rep.total[k]);
      st += rep.t[k];
      sy += y;
      stt += rep.t[k] * rep.t[k];
      sty += rep.t[k] * y;
      ++n;
    }
    const double det = n * stt - st * st;
    rep.fitted_C = (n >= 2 && det > 0.0) ? (n * sty - st * sy) / det : 0.0;
  }

  rep.pass = true;
  const double anchor = rep.total.front() + opts.atol;
  for (size_t k = 0; k < m; ++k) {
    const double envelope =
        anchor * std::exp(rep.fitted_C * rep.t[k]) * (1.0 + opts.rtol);
    if (rep.total[k] > envelope) {
      rep.pass = false;
      break;
    }
  }
  return rep;
}

}  // namespace tesim
