#include "meancurve/pde/hydro_table.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace meancurve {

HydroTable::HydroTable(std::shared_ptr<const Hydrodynamics> source, double lo, double hi, int intervals)
    : source_(std::move(source)), lo_(lo), hi_(hi), intervals_(intervals) {
  if (!source_) throw std::invalid_argument("HydroTable: null source");
  if (!(hi > lo) || lo < 0.0 || intervals < 2) throw std::invalid_argument("HydroTable: need 0 <= lo < hi and >= 2 intervals");
  zeros_ = source_->zeros();
  h_ = (hi - lo) / intervals;
  inv_h_ = 1.0 / h_;
  knots_.resize(static_cast<std::size_t>(intervals) + 1);
  f_prime_max_ = -std::numeric_limits<double>::infinity();
  double f_prime_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= intervals; ++i) {
    const double u = i == intervals ? hi : lo + i * h_;
    Knot& k = knots_[i];
    k.phi = source_->phi(u);
    k.dphi = source_->phi_prime(u);
    k.f = source_->f(u);
    k.df = source_->f_prime(u);
    phi_lip_ = std::max(phi_lip_, std::abs(k.dphi));
    f_lip_ = std::max(f_lip_, std::abs(k.df));
    f_abs_max_ = std::max(f_abs_max_, std::abs(k.f));
    f_prime_max_ = std::max(f_prime_max_, k.df);
    f_prime_min = std::min(f_prime_min, k.df);
  }
  gamma_bar_ = -f_prime_min;
  gamma_ = source_->f_prime(source_->alpha_star());
}

std::shared_ptr<const HydroTable> HydroTable::on_invariant_interval(std::shared_ptr<const Hydrodynamics> source,
                                                                   double u_lo, double u_hi, int intervals) {
  const double lo = std::min(u_lo, source->alpha_minus());
  const double hi = std::max(u_hi, source->alpha_plus());
  return std::make_shared<const HydroTable>(std::move(source), std::max(0.0, lo), hi, intervals);
}

double HydroTable::phi_prime(double u) const {
  const double s = (u - lo_) * inv_h_;
  if (!(s >= 0.0) || s > intervals_) return source_->phi_prime(u);
  std::size_t i = std::min(static_cast<std::size_t>(s), static_cast<std::size_t>(intervals_ - 1));
  const double t = s - static_cast<double>(i);
  const Knot& a = knots_[i];
  const Knot& b = knots_[i + 1];
  return (6.0 * t * (t - 1.0) * (a.phi - b.phi)) * inv_h_ + (1.0 - 4.0 * t + 3.0 * t * t) * a.dphi +
         (3.0 * t * t - 2.0 * t) * b.dphi;
}

double HydroTable::f_prime(double u) const {
  const double s = (u - lo_) * inv_h_;
  if (!(s >= 0.0) || s > intervals_) return source_->f_prime(u);
  std::size_t i = std::min(static_cast<std::size_t>(s), static_cast<std::size_t>(intervals_ - 1));
  const double t = s - static_cast<double>(i);
  const Knot& a = knots_[i];
  const Knot& b = knots_[i + 1];
  return (6.0 * t * (t - 1.0) * (a.f - b.f)) * inv_h_ + (1.0 - 4.0 * t + 3.0 * t * t) * a.df +
         (3.0 * t * t - 2.0 * t) * b.df;
}

}  // namespace meancurve
