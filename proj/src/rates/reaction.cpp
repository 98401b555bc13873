#include "meancurve/rates/reaction.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/quadrature.hpp"
#include "meancurve/core/roots.hpp"
#include "meancurve/rates/rate_model.hpp"

namespace meancurve {
namespace {

double derivative_estimate(const std::function<double(double)>& f, double x, double scale) {
  const double h = 1e-5 * scale;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Shared bisection over a for the balance integral I(a) = sum_j w_j F(a, j).
template <class Integral>
double bisect_balance(Integral&& integral, double a_lo, double a_hi) {
  const double span = a_hi - a_lo;
  const double lo = a_lo + 1e-9 * span;
  const double hi = a_hi - 1e-9 * span;
  const double i_lo = integral(lo);
  const double i_hi = integral(hi);
  if (!(i_lo > 0.0 && i_hi < 0.0)) {
    std::ostringstream msg;
    msg << "balance integral does not change sign on (" << a_lo << ", " << a_hi << "): I(lo) = " << i_lo
        << ", I(hi) = " << i_hi;
    throw NoSignChange(msg.str());
  }
  return bisect(integral, lo, hi, 0.0);
}

}  // namespace

ReactionZeros find_zeros(const std::function<double(double)>& f, double lo, double hi, int scan_points) {
  if (!(hi > lo) || scan_points < 4) throw std::invalid_argument("find_zeros: bad scan interval");
  std::vector<double> roots;
  double x_prev = lo;
  double f_prev = f(lo);
  for (int i = 1; i <= scan_points; ++i) {
    const double x = lo + (hi - lo) * i / scan_points;
    const double fx = f(x);
    if (f_prev == 0.0) {
      roots.push_back(x_prev);
    } else if ((f_prev > 0.0) != (fx > 0.0) && fx != 0.0) {
      roots.push_back(bisect(f, x_prev, x, 0.0));
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) roots.push_back(x_prev);
  if (roots.size() != 3) {
    std::ostringstream msg;
    msg << "expected 3 zeros of f on [" << lo << ", " << hi << "], found " << roots.size();
    throw BistabilityViolated(msg.str());
  }
  const double scale = hi - lo;
  const double d0 = derivative_estimate(f, roots[0], scale);
  const double d1 = derivative_estimate(f, roots[1], scale);
  const double d2 = derivative_estimate(f, roots[2], scale);
  if (!(d0 < 0.0 && d1 > 0.0 && d2 < 0.0)) {
    std::ostringstream msg;
    msg << "derivative signs at the zeros are (" << d0 << ", " << d1 << ", " << d2 << "), need (-, +, -)";
    throw BistabilityViolated(msg.str());
  }
  return {roots[0], roots[1], roots[2]};
}

double balance_integral(const Hydrodynamics& hydro, int panels) {
  return gauss_legendre(
      [&](double u) {
        const auto [fv, dp] = hydro.f_and_phi_prime(u);
        return fv * dp;
      },
      hydro.alpha_minus(), hydro.alpha_plus(), panels);
}

double calibrate_balance(const std::function<double(double, double)>& f_family,
                         const std::function<double(double)>& phi_prime, double alpha_minus, double alpha_plus,
                         double a_lo, double a_hi, int panels) {
  const auto q = gauss_legendre_nodes(alpha_minus, alpha_plus, panels);
  std::vector<double> dphi(q.x.size());
  for (std::size_t j = 0; j < q.x.size(); ++j) dphi[j] = phi_prime(q.x[j]);
  auto integral = [&](double a) {
    double s = 0.0;
    for (std::size_t j = 0; j < q.x.size(); ++j) s += q.w[j] * f_family(a, q.x[j]) * dphi[j];
    return s;
  };
  return bisect_balance(integral, a_lo, a_hi);
}

double calibrate_balance(const RateModel& model, int panels) {
  const auto& gl = model.glauber();
  // The outer zeros alpha_pm = r^{-1}(a_pm) do not depend on a*, so the
  // local equilibrium at every node is computed once.
  const double alpha_minus = model.occupancy_inverse(gl.a_minus);
  const double alpha_plus = model.occupancy_inverse(gl.a_plus);
  const auto q = gauss_legendre_nodes(alpha_minus, alpha_plus, panels);
  std::vector<double> weight(q.x.size());
  std::vector<double> r(q.x.size());
  for (std::size_t j = 0; j < q.x.size(); ++j) {
    const auto eq = model.local_equilibrium(q.x[j]);
    r[j] = eq.r;
    weight[j] = -q.w[j] * gl.C * eq.v * (eq.r - gl.a_minus) * (eq.r - gl.a_plus) * eq.phi_prime;
  }
  auto integral = [&](double a_star) {
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += weight[j] * (r[j] - a_star);
    return s;
  };
  return bisect_balance(integral, gl.a_minus, gl.a_plus);
}

}  // namespace meancurve
