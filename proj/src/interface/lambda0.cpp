#include "meancurve/interface/lambda0.hpp"

#include <cmath>
#include <sstream>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/quadrature.hpp"

namespace meancurve {

double lambda0_intrinsic(const PotentialW& W) {
  const Hydrodynamics& h = W.hydro();
  auto root_w = [&](double u) { return std::sqrt(std::max(W(u), 0.0)); };
  auto weighted = [&](double u) { return h.phi_prime(u) * root_w(u); };
  const double am = h.alpha_minus(), as = h.alpha_star(), ap = h.alpha_plus();
  const double num = integrate_adaptive(weighted, am, as, 1e-13) + integrate_adaptive(weighted, as, ap, 1e-13);
  const double den = integrate_adaptive(root_w, am, as, 1e-13) + integrate_adaptive(root_w, as, ap, 1e-13);
  return num / den;
}

ProfileIntegrals profile_integrals(const WaveProfile& profile, const Hydrodynamics& hydro) {
  const std::size_t n = profile.z.size();
  if (n < 2) throw std::invalid_argument("profile_integrals: profile needs at least two nodes");
  const double h = profile.spacing();
  ProfileIntegrals out;
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = hydro.phi_prime(profile.U0[i]);
    const double uz = profile.U0_z[i];
    a[i] = dp * dp * uz * uz;
    b[i] = dp * uz * uz;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    out.numerator += w * a[i];
    out.denominator += w * b[i];
  }
  // integrands decay like exp(-2 mu |z|) beyond the window
  const double left = std::max(a.front() / out.numerator, b.front() / out.denominator) / (2.0 * profile.mu_plus);
  const double right = std::max(a.back() / out.numerator, b.back() / out.denominator) / (2.0 * profile.mu_minus);
  out.tail_estimate = left + right;
  return out;
}

double lambda0_profile(const WaveProfile& profile, const Hydrodynamics& hydro, double tail_tol) {
  const auto I = profile_integrals(profile, hydro);
  if (I.tail_estimate > tail_tol) {
    std::ostringstream msg;
    msg << "relative tail beyond the z window is " << I.tail_estimate << " > " << tail_tol;
    throw TailUnresolved(msg.str());
  }
  return I.numerator / I.denominator;
}

double FlowConstant::relative_gap() const {
  return std::abs(lambda0_intrinsic - lambda0_profile) / std::abs(lambda0_intrinsic);
}

FlowConstant flow_constant(std::shared_ptr<const Hydrodynamics> hydro, const WaveProfileOptions& options) {
  const PotentialW W(hydro);
  FlowConstant out;
  out.lambda0_intrinsic = lambda0_intrinsic(W);
  const auto profile = wave_profile(W, options);
  out.lambda0_profile = lambda0_profile(profile, *hydro);
  out.balance_residual = W.balance_residual();
  out.profile_residual = profile_residual(profile, *hydro);
  return out;
}

}  // namespace meancurve
