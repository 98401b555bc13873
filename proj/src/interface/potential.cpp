#include "meancurve/interface/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "meancurve/core/quadrature.hpp"

namespace meancurve {
namespace {

void require_in_range(double u, const Hydrodynamics& h, const char* who) {
  const double slack = 1e-12 * std::max(1.0, h.alpha_plus());
  if (u < h.alpha_minus() - slack || u > h.alpha_plus() + slack) {
    std::ostringstream msg;
    msg << who << ": u = " << u << " outside [" << h.alpha_minus() << ", " << h.alpha_plus() << "]";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double potential_W(double u, const Hydrodynamics& hydro) {
  require_in_range(u, hydro, "potential_W");
  const double a = std::min(u, hydro.alpha_plus());
  if (a == hydro.alpha_plus()) return 0.0;
  auto integrand = [&](double s) {
    const auto [fv, dp] = hydro.f_and_phi_prime(s);
    return fv * dp;
  };
  // split at alpha* where the integrand changes sign
  const double star = hydro.alpha_star();
  if (a >= star) return integrate_adaptive(integrand, a, hydro.alpha_plus(), 1e-12);
  return integrate_adaptive(integrand, a, star, 1e-12) + integrate_adaptive(integrand, star, hydro.alpha_plus(), 1e-12);
}

PotentialW::PotentialW(std::shared_ptr<const Hydrodynamics> hydro, int panels_per_side) : hydro_(std::move(hydro)) {
  if (!hydro_) throw std::invalid_argument("PotentialW: null model");
  if (panels_per_side < 1) throw std::invalid_argument("PotentialW: need at least one panel per side");
  const double am = hydro_->alpha_minus(), as = hydro_->alpha_star(), ap = hydro_->alpha_plus();
  for (int k = 0; k < panels_per_side; ++k) edges_.push_back(am + (as - am) * k / panels_per_side);
  star_index_ = edges_.size();
  for (int k = 0; k < panels_per_side; ++k) edges_.push_back(as + (ap - as) * k / panels_per_side);
  edges_.push_back(ap);

  const std::size_t n = edges_.size();
  std::vector<double> piece(n - 1);
  auto f = [this](double s) { return integrand(s); };
  for (std::size_t k = 0; k + 1 < n; ++k) piece[k] = gauss_legendre(f, edges_[k], edges_[k + 1]);
  cum_right_.assign(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) cum_right_[k] = cum_right_[k + 1] + piece[k];
  cum_left_.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) cum_left_[k] = cum_left_[k - 1] + piece[k - 1];
  w_star_ = cum_right_[star_index_];
}

std::size_t PotentialW::panel_of(double u) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - edges_.begin());
  return std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, edges_.size() - 2);
}

double PotentialW::from_right(double u) const {
  require_in_range(u, *hydro_, "PotentialW");
  if (u >= edges_.back()) return 0.0;
  const std::size_t k = panel_of(u);
  auto f = [this](double s) { return integrand(s); };
  return cum_right_[k + 1] + gauss_legendre(f, std::max(u, edges_.front()), edges_[k + 1]);
}

double PotentialW::operator()(double u) const {
  if (u >= hydro_->alpha_star()) return from_right(u);
  require_in_range(u, *hydro_, "PotentialW");
  if (u <= edges_.front()) return 0.0;
  const std::size_t k = panel_of(u);
  auto f = [this](double s) { return integrand(s); };
  return -(cum_left_[k] + gauss_legendre(f, edges_[k], u));
}

}  // namespace meancurve
