#include "meancurve/rates/hydrodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace meancurve {

double Hydrodynamics::f_prime(double u) const {
  const double h = 1e-4 * std::max(1.0, std::abs(u));
  if (u - 2.0 * h >= 0.0)
    return (f(u - 2.0 * h) - 8.0 * f(u - h) + 8.0 * f(u + h) - f(u + 2.0 * h)) / (12.0 * h);
  // one-sided, fourth order
  return (-25.0 * f(u) + 48.0 * f(u + h) - 36.0 * f(u + 2.0 * h) + 16.0 * f(u + 3.0 * h) - 3.0 * f(u + 4.0 * h)) /
         (12.0 * h);
}

SyntheticHydrodynamics::SyntheticHydrodynamics(Fn phi, Fn phi_prime, Fn f, ReactionZeros zeros, Fn f_prime)
    : phi_(std::move(phi)), phi_prime_(std::move(phi_prime)), f_(std::move(f)), f_prime_(std::move(f_prime)) {
  if (!phi_ || !phi_prime_ || !f_) throw std::invalid_argument("SyntheticHydrodynamics: missing callable");
  if (!(zeros.alpha_minus < zeros.alpha_star && zeros.alpha_star < zeros.alpha_plus))
    throw std::invalid_argument("SyntheticHydrodynamics: zeros must be increasing");
  zeros_ = zeros;
}

SyntheticHydrodynamics SyntheticHydrodynamics::linear_cubic(double a_minus, double a_star, double a_plus,
                                                            double scale) {
  auto f = [=](double u) { return -scale * (u - a_minus) * (u - a_star) * (u - a_plus); };
  auto fp = [=](double u) {
    return -scale * ((u - a_star) * (u - a_plus) + (u - a_minus) * (u - a_plus) + (u - a_minus) * (u - a_star));
  };
  return SyntheticHydrodynamics([](double u) { return u; }, [](double) { return 1.0; }, f,
                                ReactionZeros{a_minus, a_star, a_plus}, fp);
}

ScaledReaction::ScaledReaction(std::shared_ptr<const Hydrodynamics> base, double factor)
    : base_(std::move(base)), factor_(factor) {
  if (!base_) throw std::invalid_argument("ScaledReaction: null base");
  if (!(factor > 0.0)) throw std::invalid_argument("ScaledReaction: factor must be positive");
  zeros_ = base_->zeros();
}

}  // namespace meancurve
