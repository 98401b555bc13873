#include "meancurve/pde/generation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "meancurve/core/errors.hpp"

namespace meancurve {

double ode_Y(double tau_end, double zeta, const Hydrodynamics& reaction, double tol) {
  namespace odeint = boost::numeric::odeint;
  if (!(zeta >= 0.0)) throw std::invalid_argument("ode_Y: zeta must be nonnegative");
  if (!(tau_end >= 0.0)) throw std::invalid_argument("ode_Y: tau_end must be nonnegative");
  const double lo = std::min(zeta, reaction.alpha_minus());
  const double hi = std::max(zeta, reaction.alpha_plus());
  if (tau_end == 0.0 || reaction.f(zeta) == 0.0) return zeta;

  double y = zeta;
  auto rhs = [&](const double& state, double& dydt, double) { dydt = reaction.f(std::clamp(state, lo, hi)); };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<double>>(tol, tol);
  double t = 0.0;
  double dt = std::min(tau_end, 1e-3);
  for (long iter = 0; t < tau_end; ++iter) {
    if (iter > 1000000) throw StepFailure("ode_Y: step budget exhausted");
    dt = std::min(dt, tau_end - t);
    if (stepper.try_step(rhs, y, t, dt) == odeint::fail && dt < 1e-14 * std::max(1.0, t))
      throw StepFailure("ode_Y: step size underflow");
  }
  if (!std::isfinite(y)) throw StepFailure("ode_Y: non-finite state");
  return std::clamp(y, lo, hi);
}

double generation_time(double K, double gamma) {
  if (!(K > 1.0) || !(gamma > 0.0)) throw std::invalid_argument("generation_time: need K > 1 and gamma > 0");
  return std::log(K) / (2.0 * gamma * K);
}

double default_C4(const HydroTable& table) { return 2.0 * table.f_abs_max() / table.gamma(); }

double envelope_shift(double C4, double gamma, double K, double t) { return C4 * std::expm1(gamma * K * t) / K; }

Envelopes generation_envelopes(const DensityField& u0, double K, double C4, double t, const HydroTable& table) {
  if (!(C4 > 0.0)) throw std::invalid_argument("generation_envelopes: C4 must be positive");
  const double P = envelope_shift(C4, table.gamma(), K, t);
  Envelopes out{u0, u0};
  out.lower.t = out.upper.t = u0.t + t;
  std::map<double, double> cache;
  auto Y = [&](double zeta) {
    zeta = std::clamp(zeta, table.lo(), table.hi());
    auto it = cache.find(zeta);
    if (it != cache.end()) return it->second;
    const double y = ode_Y(K * t, zeta, table);
    cache.emplace(zeta, y);
    return y;
  };
  for (std::size_t x = 0; x < u0.u.size(); ++x) {
    out.lower.u[x] = Y(u0.u[x] - P);
    out.upper.u[x] = Y(u0.u[x] + P);
  }
  return out;
}

}  // namespace meancurve
