#pragma once

#include <memory>
#include <vector>

#include "meancurve/rates/hydrodynamics.hpp"

namespace meancurve {

/// W(u) = int_u^{alpha+} f(s) phi'(s) ds by adaptive quadrature (relative
/// tolerance 1e-12). Requires u in [alpha-, alpha+].
double potential_W(double u, const Hydrodynamics& hydro);

/// W on [alpha-, alpha+] from cached composite Gauss-Legendre panels on each
/// side of alpha*.
///
/// `operator()` integrates away from the nearer stable zero: W(u) for u >= alpha*
/// and -int_{alpha-}^u f phi' below it. The two agree when the balance
/// condition holds, and the second avoids cancellation near alpha-.
class PotentialW {
 public:
  explicit PotentialW(std::shared_ptr<const Hydrodynamics> hydro, int panels_per_side = 128);

  double operator()(double u) const;
  /// int_u^{alpha+} f phi', the defining formula.
  double from_right(double u) const;
  /// int_{alpha-}^{alpha+} f phi'.
  double balance_residual() const noexcept { return cum_right_.front(); }
  double at_alpha_star() const noexcept { return w_star_; }

  double integrand(double s) const {
    const auto [fv, dp] = hydro_->f_and_phi_prime(s);
    return fv * dp;
  }
  const Hydrodynamics& hydro() const noexcept { return *hydro_; }
  std::shared_ptr<const Hydrodynamics> hydro_ptr() const noexcept { return hydro_; }

 private:
  std::size_t panel_of(double u) const;

  std::shared_ptr<const Hydrodynamics> hydro_;
  std::vector<double> edges_;      // ascending, alpha- .. alpha* .. alpha+
  std::vector<double> cum_right_;  // int_{edge_k}^{alpha+}
  std::vector<double> cum_left_;   // int_{alpha-}^{edge_k}
  std::size_t star_index_ = 0;
  double w_star_ = 0.0;
};

}  // namespace meancurve
