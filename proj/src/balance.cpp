#include "tesim/balance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "tesim/grid_ops.hpp"
#include "tesim/solver.hpp"

namespace tesim {

namespace {

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

Field map_theta(const Field& theta, const ConstitutiveParams& p,
                double (*fn)(const ConstitutiveParams&, double)) {
  Field out = Field::scalar(theta.grid);
  for (size_t i = 0; i < theta.values.size(); ++i)
    out.values[i] = fn(p, theta.values[i]);
  return out;
}

}  // namespace

std::string balance_csv_header() {
  return "t,kinetic,elastic,thermal,entropy_total,dissipation_cum,"
         "delta_sq_cum,delta_inv_sq_cum,energy_residual,dissipation_residual,"
         "min_theta,max_theta";
}

std::string balance_csv_line(const BalanceRow& r) {
  return fmt(r.t) + "," + fmt(r.kinetic) + "," + fmt(r.elastic) + "," +
         fmt(r.thermal) + "," + fmt(r.entropy_total) + "," +
         fmt(r.dissipation_cum) + "," + fmt(r.delta_sq_cum) + "," +
         fmt(r.delta_inv_sq_cum) + "," + fmt(r.energy_residual) + "," +
         fmt(r.dissipation_residual) + "," + fmt(r.min_theta) + "," +
         fmt(r.max_theta);
}

Field entropy_production_field(const Field& theta,
                               const ConstitutiveParams& p) {
  const Field g = gradient(theta);
  Field out = Field::scalar(theta.grid);
  const int n = theta.grid.node_count();
  for (int i = 0; i < n; ++i) {
    const double th = theta.at(i);
    if (!(th > 0.0))
      throw std::domain_error("entropy_production_field: theta <= 0");
    double g2 = 0.0;
    for (int c = 0; c < g.components; ++c) g2 += g.at(i, c) * g.at(i, c);
    out.at(i) = conductivity(p, th) * g2 / (th * th);
  }
  return out;
}

BalanceRow BalanceAccumulator::instantaneous(const SimState& s) const {
  BalanceRow r;
  r.t = s.t;
  r.kinetic = 0.5 * inner(s.v, s.v);
  r.elastic = elastic_energy(s.u);
  r.thermal = integrate(map_theta(s.theta, p_, internal_energy));
  r.entropy_total = integrate(map_theta(s.theta, p_, entropy)) +
                    p_.mu * integrate(divergence(s.u));
  r.min_theta = field_min(s.theta);
  r.max_theta = field_max(s.theta);
  return r;
}

BalanceAccumulator::BalanceAccumulator(const SimState& initial,
                                       const ConstitutiveParams& p)
    : p_(p) {
  p_.validate();
  first_ = instantaneous(initial);
  e0_ = first_.thermal + first_.kinetic + first_.elastic;
  h0_ = first_.thermal - first_.entropy_total + first_.kinetic +
        first_.elastic;
}

BalanceRow BalanceAccumulator::update(const SimState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("BalanceAccumulator: dt <= 0");
  // Backward-Euler time quadrature: each increment is evaluated at the new
  // state, matching the stepper so the residuals isolate scheme error.
  dissipation_cum_ += dt * integrate(entropy_production_field(s.theta, p_));
  if (p_.delta > 0.0) {
    Field sq = Field::scalar(s.theta.grid), inv_sq = sq, lin = sq,
          inv_cube = sq;
    for (size_t i = 0; i < s.theta.values.size(); ++i) {
      const double th = s.theta.values[i];
      sq.values[i] = th * th;
      inv_sq.values[i] = 1.0 / (th * th);
      lin.values[i] = th;
      inv_cube.values[i] = 1.0 / (th * th * th);
    }
    d_sq_ += dt * p_.delta * integrate(sq);
    d_inv_sq_ += dt * p_.delta * integrate(inv_sq);
    d_lin_ += dt * p_.delta * integrate(lin);
    d_inv_cube_ += dt * p_.delta * integrate(inv_cube);
  }

  BalanceRow r = instantaneous(s);
  r.dissipation_cum = dissipation_cum_;
  r.delta_sq_cum = d_sq_;
  r.delta_inv_sq_cum = d_inv_sq_;
  r.energy_residual =
      (r.thermal + r.kinetic + r.elastic + d_sq_) - e0_ - d_inv_sq_;
  r.dissipation_residual = (r.thermal - r.entropy_total + r.kinetic +
                            r.elastic + dissipation_cum_ + d_sq_ +
                            d_inv_cube_) -
                           h0_ - (d_lin_ + d_inv_sq_);
  return r;
}

std::vector<double> min_temperature_bound(double theta0_min,
                                          const std::vector<double>& times,
                                          const std::vector<double>& a_inf) {
  if (times.size() != a_inf.size())
    throw std::invalid_argument("min_temperature_bound: size mismatch");
  if (!(theta0_min > 0.0))
    throw std::domain_error("min_temperature_bound: theta0_min <= 0");
  std::vector<double> bound(times.size());
  double cum = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    if (k > 0) {
      const double dt = times[k] - times[k - 1];
      if (!(dt >= 0.0))
        throw std::invalid_argument("min_temperature_bound: times decrease");
      cum += 0.5 * dt * (a_inf[k] + a_inf[k - 1]);
    }
    bound[k] = theta0_min * std::exp(-cum);
  }
  return bound;
}

double tail_mass(const Field& theta, double k, double s) {
  if (!(k > 0.0)) throw std::invalid_argument("tail_mass: k must be > 0");
  if (!(s >= 0.0)) throw std::invalid_argument("tail_mass: s must be >= 0");
  const Grid& g = theta.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const double excess = theta.at(g.index(ix, iy)) - k;
      if (excess <= 0.0) continue;
      acc += g.weight(ix, iy) * (s == 0.0 ? 1.0 : std::pow(excess, s));
    }
  return acc;
}

DefectIndicator defect_indicator(const Field& production) {
  const Grid& g = production.grid;
  const int nx = g.cells[0];
  const int ny = g.dim == 2 ? g.cells[1] : 1;
  DefectIndicator d;
  double total = 0.0, best = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int n = g.index(ix, iy);
      const double wp = g.weight(ix, iy) * production.at(n);
      total += wp;
      if (wp > best) {
        best = wp;
        d.argmax_node = n;
      }
    }
  d.ratio = total > 0.0 ? best / total : 0.0;
  return d;
}

ComparisonBracket comparison_bracket(double theta0_min, double theta0_max,
                                     double a_min, double a_max,
                                     double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("comparison_bracket: delta must be > 0");
  if (!(theta0_min > 0.0) || theta0_max < theta0_min)
    throw std::invalid_argument("comparison_bracket: bad theta0 range");

  // g(x) = a*x + delta*(x^2 - x^-2) runs from -inf (x -> 0+) to +inf, so a
  // sign change always exists; bisect it down to machine width.
  auto root = [delta](double a) {
    auto g = [&](double x) { return a * x + delta * (x * x - 1.0 / (x * x)); };
    double lo = 1e-12, hi = 2.0;
    while (g(hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  ComparisonBracket b;
  b.lower = std::min(root(a_max), theta0_min);
  b.upper = std::max(root(a_min), theta0_max);
  return b;
}

}  // namespace tesim
