#pragma once

#include <array>
#include <memory>
#include <vector>

#include "meancurve/core/lattice.hpp"
#include "meancurve/rates/hydrodynamics.hpp"
#include "meancurve/rates/jump_rate.hpp"
#include "meancurve/rates/marginal.hpp"

namespace meancurve {

/// Glauber creation/annihilation rates of the example family
///
///   c+(eta) = C / g(eta_0 + 1) * { s1 1(eta_e1 >= 1) 1(eta_e2 >= 1) + s3 }
///   c-(eta) = C / g(eta_e3 + 1) * { 1(eta_e1 >= 1) 1(eta_e2 >= 1) + s2 } 1(eta_0 >= 1)
///
/// with s1, s2, s3 the elementary symmetric polynomials of (a-, a*, a+). Its
/// ensemble average is f = -C v (r - a-)(r - a*)(r - a+), r = P(eta_0 >= 1),
/// v = E[1 / g(eta_0 + 1)] = r / phi.
struct GlauberRateSpec {
  double C = 1.0;
  double a_minus = 0.2;
  double a_star = 0.5;
  double a_plus = 0.8;
  /// e1, e2, e3; empty means default_offsets(d) for the lattice in use.
  std::vector<Offset> offsets;

  /// Throws std::invalid_argument unless 0 < a- < a* < a+ < 1, C > 0 and the
  /// offsets (if given) are three distinct nonzero points.
  void validate() const;

  double s1() const noexcept { return a_minus + a_star + a_plus; }
  double s2() const noexcept { return a_minus * a_star + a_minus * a_plus + a_star * a_plus; }
  double s3() const noexcept { return a_minus * a_star * a_plus; }
};

/// e1 = (1,0,..), e2 = (0,1,..), e3 = (-1,0,..) for d >= 2; 1, 2, -1 for d = 1.
std::array<Offset, 3> default_offsets(int d);

/// Local equilibrium quantities at one density, from a single fugacity solve.
struct LocalEquilibrium {
  double rho;
  double phi;
  double phi_prime;
  double r;  // P(eta_0 >= 1)
  double v;  // E[1 / g(eta_0 + 1)]
  double f;
};

/// Microscopic specification: jump rate g plus Glauber rates.
class RateModel {
 public:
  RateModel(JumpRate g, GlauberRateSpec glauber);

  const JumpRate& jump_rate() const noexcept { return g_; }
  const GlauberRateSpec& glauber() const noexcept { return glauber_; }
  /// Copy with a different a*.
  RateModel with_a_star(double a_star) const;

  std::array<Offset, 3> offsets(int d) const;

  /// c+ evaluated on the window values (eta_0, eta_e1, eta_e2, eta_e3).
  double creation_rate(std::int64_t eta0, std::int64_t eta1, std::int64_t eta2,
                       std::int64_t /*eta3*/) const noexcept {
    const double both = (eta1 >= 1 && eta2 >= 1) ? 1.0 : 0.0;
    return glauber_.C / g_(eta0 + 1) * (s1_ * both + s3_);
  }
  /// c- evaluated on the window values; zero on empty sites.
  double annihilation_rate(std::int64_t eta0, std::int64_t eta1, std::int64_t eta2, std::int64_t eta3) const noexcept {
    if (eta0 < 1) return 0.0;
    const double both = (eta1 >= 1 && eta2 >= 1) ? 1.0 : 0.0;
    return glauber_.C / g_(eta3 + 1) * (both + s2_);
  }

  LocalEquilibrium local_equilibrium(double rho) const;

  double phi(double rho) const { return fugacity(g_, rho); }
  double phi_prime(double rho) const { return fugacity_derivative(g_, rho); }
  double occupied_fraction(double rho) const;
  double inverse_rate_mean(double rho) const;
  /// Density at which P(eta_0 >= 1) = a, for a in (0, 1).
  double occupancy_inverse(double a) const;

 private:
  JumpRate g_;
  GlauberRateSpec glauber_;
  double s1_, s2_, s3_;
};

/// f(rho) = E[c+] - E[c-] in closed form.
double reaction_f(const RateModel& model, double rho);

/// Hydrodynamic coefficients of a rate model: phi = fugacity, f = reaction_f.
/// Zeros are located with find_zeros at construction.
class ParticleHydrodynamics final : public Hydrodynamics {
 public:
  explicit ParticleHydrodynamics(RateModel model);

  const RateModel& model() const noexcept { return model_; }
  double phi(double u) const override { return model_.phi(u); }
  double phi_prime(double u) const override { return model_.phi_prime(u); }
  double f(double u) const override { return reaction_f(model_, u); }
  std::pair<double, double> f_and_phi_prime(double u) const override {
    const auto eq = model_.local_equilibrium(u);
    return {eq.f, eq.phi_prime};
  }

 private:
  RateModel model_;
};

}  // namespace meancurve
