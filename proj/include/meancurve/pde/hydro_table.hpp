#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "meancurve/rates/hydrodynamics.hpp"

namespace meancurve {

/// Cubic Hermite tables of phi and f on [lo, hi], built from exact values and
/// derivatives at uniform knots. Arguments outside the range fall back to the
/// source model.
class HydroTable final : public Hydrodynamics {
 public:
  static constexpr int kDefaultKnots = 2048;

  HydroTable(std::shared_ptr<const Hydrodynamics> source, double lo, double hi, int intervals = kDefaultKnots);

  /// Table on the invariant interval [min(u_lo, alpha-), max(u_hi, alpha+)].
  static std::shared_ptr<const HydroTable> on_invariant_interval(std::shared_ptr<const Hydrodynamics> source,
                                                                 double u_lo, double u_hi,
                                                                 int intervals = kDefaultKnots);

  double phi(double u) const override {
    double p, fv;
    eval(u, p, fv);
    return p;
  }
  double f(double u) const override {
    double p, fv;
    eval(u, p, fv);
    return fv;
  }
  double phi_prime(double u) const override;
  double f_prime(double u) const override;

  /// phi(u) and f(u) from one table lookup.
  void eval(double u, double& phi_out, double& f_out) const {
    const double s = (u - lo_) * inv_h_;
    if (!(s >= 0.0) || s > static_cast<double>(intervals_)) {
      phi_out = source_->phi(u);
      f_out = source_->f(u);
      return;
    }
    std::size_t i = static_cast<std::size_t>(s);
    if (i == static_cast<std::size_t>(intervals_)) --i;
    const double t = s - static_cast<double>(i);
    const double t2 = t * t, omt = 1.0 - t;
    const double h00 = (1.0 + 2.0 * t) * omt * omt;
    const double h10 = t * omt * omt * h_;
    const double h01 = t2 * (3.0 - 2.0 * t);
    const double h11 = t2 * (t - 1.0) * h_;
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    phi_out = h00 * a.phi + h10 * a.dphi + h01 * b.phi + h11 * b.dphi;
    f_out = h00 * a.f + h10 * a.df + h01 * b.f + h11 * b.df;
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int intervals() const noexcept { return intervals_; }
  /// max |phi'| and max |f'| over the knots.
  double phi_lip() const noexcept { return phi_lip_; }
  double f_lip() const noexcept { return f_lip_; }
  /// f'(alpha*), the linear growth rate at the unstable zero.
  double gamma() const noexcept { return gamma_; }
  /// max f' over the table range.
  double f_prime_max() const noexcept { return f_prime_max_; }
  /// -min f' over the table range.
  double gamma_bar() const noexcept { return gamma_bar_; }
  double f_abs_max() const noexcept { return f_abs_max_; }
  const Hydrodynamics& source() const noexcept { return *source_; }
  std::shared_ptr<const Hydrodynamics> source_ptr() const noexcept { return source_; }

 private:
  struct Knot {
    double phi, dphi, f, df;
  };

  std::shared_ptr<const Hydrodynamics> source_;
  double lo_, hi_, h_, inv_h_;
  int intervals_;
  std::vector<Knot> knots_;
  double phi_lip_ = 0.0, f_lip_ = 0.0, gamma_ = 0.0, f_prime_max_ = 0.0, gamma_bar_ = 0.0, f_abs_max_ = 0.0;
};

}  // namespace meancurve
