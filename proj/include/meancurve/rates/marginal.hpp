#pragma once

#include <cstdint>
#include <vector>

#include "meancurve/core/random.hpp"
#include "meancurve/rates/jump_rate.hpp"

namespace meancurve {

inline constexpr double kDefaultSeriesTol = 1e-16;
inline constexpr int kSeriesCap = 10000;

struct PartitionValue {
  double Z;
  int K_trunc;  // index of the last retained term
};

/// Z(phi) = sum_k phi^k / g(k)!, truncated once the remaining tail (bounded
/// geometrically from the current term ratio) drops below tol * Z.
/// Throws NonConvergent if the terms have not decayed by k = kSeriesCap.
PartitionValue partition_function(const JumpRate& g, double phi, double tol = kDefaultSeriesTol);

/// One-site zero-range equilibrium marginal, truncated to k = 0..K_trunc and
/// renormalised. Immutable after construction.
class Marginal {
 public:
  static Marginal from_fugacity(const JumpRate& g, double phi, double tol = kDefaultSeriesTol);
  static Marginal from_density(const JumpRate& g, double rho, double tol = kDefaultSeriesTol);

  double rho() const noexcept { return rho_; }
  double phi() const noexcept { return phi_; }
  double Z() const noexcept { return Z_; }
  double trunc_tol() const noexcept { return trunc_tol_; }
  double variance() const noexcept { return variance_; }
  /// <g(eta_0)>; equals phi up to truncation error.
  double mean_g() const noexcept { return mean_g_; }
  int K_trunc() const noexcept { return static_cast<int>(pmf_.size()) - 1; }
  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double pmf(std::int64_t k) const noexcept {
    return k >= 0 && k < static_cast<std::int64_t>(pmf_.size()) ? pmf_[k] : 0.0;
  }
  /// P(eta_0 >= 1), computed without cancellation for small densities.
  double occupied_probability() const noexcept { return occupied_; }

  /// Inverse-CDF draw.
  int sample(Rng& rng) const;

 private:
  Marginal() = default;
  double rho_ = 0.0;
  double phi_ = 0.0;
  double Z_ = 1.0;
  double trunc_tol_ = 0.0;
  double variance_ = 0.0;
  double mean_g_ = 0.0;
  double occupied_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

/// rho(phi) = <k> under the marginal with fugacity phi.
double mean_density(const JumpRate& g, double phi, double tol = kDefaultSeriesTol);

/// Inverse of mean_density: the unique phi with mean_density(phi) = rho.
/// Safeguarded Newton using d rho / d phi = Var / phi, bisection fallback.
double fugacity(const JumpRate& g, double rho, double tol = kDefaultSeriesTol);

/// phi'(rho) = phi(rho) / Var_{nu_rho}(eta_0); phi'(0) = g(1) by continuity.
double fugacity_derivative(const JumpRate& g, double rho, double tol = kDefaultSeriesTol);

/// nu_rho(k) = phi(rho)^k / (Z g(k)!), renormalised over the truncation window.
double marginal_pmf(const JumpRate& g, double rho, std::int64_t k, double tol = kDefaultSeriesTol);

/// Single inverse-CDF draw from nu_rho. Build a Marginal once when drawing repeatedly.
int sample_marginal(const JumpRate& g, double rho, Rng& rng);

}  // namespace meancurve
