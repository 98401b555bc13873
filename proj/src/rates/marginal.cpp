#include "meancurve/rates/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "meancurve/core/errors.hpp"

namespace meancurve {
namespace {

// Unnormalised terms phi^k / g(k)! up to the truncation index.
std::vector<double> series_terms(const JumpRate& g, double phi, double tol) {
  if (phi < 0.0 || !std::isfinite(phi)) {
    std::ostringstream msg;
    msg << "fugacity must be finite and nonnegative, got " << phi;
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> terms{1.0};
  if (phi == 0.0) return terms;
  if (phi >= g.phi_star()) {
    std::ostringstream msg;
    msg << "fugacity " << phi << " at or beyond the radius of convergence " << g.phi_star();
    throw NonConvergent(msg.str());
  }
  const double log_phi = std::log(phi);
  double Z = 1.0;
  for (int k = 1; k <= kSeriesCap; ++k) {
    const double t = std::exp(k * log_phi - g.log_factorial(k));
    terms.push_back(t);
    Z += t;
    const double q = phi / g(k + 1);
    if (q < 1.0 && t * q / (1.0 - q) < tol * Z) return terms;
  }
  std::ostringstream msg;
  msg << "partition series for phi = " << phi << " did not decay within " << kSeriesCap << " terms";
  throw NonConvergent(msg.str());
}

}  // namespace

PartitionValue partition_function(const JumpRate& g, double phi, double tol) {
  const auto terms = series_terms(g, phi, tol);
  double Z = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) Z += *it;
  return {Z, static_cast<int>(terms.size()) - 1};
}

Marginal Marginal::from_fugacity(const JumpRate& g, double phi, double tol) {
  auto terms = series_terms(g, phi, tol);
  Marginal m;
  m.phi_ = phi;
  m.trunc_tol_ = tol;
  double Z = 0.0;
  double tail = 0.0;  // sum over k >= 1
  for (std::size_t k = terms.size(); k-- > 1;) tail += terms[k];
  Z = 1.0 + tail;
  m.Z_ = Z;
  m.occupied_ = tail / Z;
  m.pmf_.resize(terms.size());
  m.cdf_.resize(terms.size());
  double rho = 0.0;
  double mean_g = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    m.pmf_[k] = terms[k] / Z;
    acc += m.pmf_[k];
    m.cdf_[k] = acc;
    rho += static_cast<double>(k) * m.pmf_[k];
    mean_g += g(static_cast<std::int64_t>(k)) * m.pmf_[k];
  }
  m.cdf_.back() = 1.0;
  double var = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double dk = static_cast<double>(k) - rho;
    var += dk * dk * m.pmf_[k];
  }
  m.rho_ = rho;
  m.mean_g_ = mean_g;
  m.variance_ = var;
  return m;
}

Marginal Marginal::from_density(const JumpRate& g, double rho, double tol) {
  Marginal m = from_fugacity(g, fugacity(g, rho, tol), tol);
  return m;
}

int Marginal::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

double mean_density(const JumpRate& g, double phi, double tol) {
  return Marginal::from_fugacity(g, phi, tol).rho();
}

double fugacity(const JumpRate& g, double rho, double tol) {
  if (rho < 0.0 || !std::isfinite(rho)) throw std::invalid_argument("fugacity: density must be finite and >= 0");
  if (rho == 0.0) return 0.0;

  // Bracket [lo, hi] with rho(lo) <= rho < rho(hi). Evaluations that fail to
  // converge are treated as lying above the target (rho diverges at phi*).
  const double phi_star = g.phi_star();
  auto density_or_inf = [&](double phi) {
    try {
      return mean_density(g, phi, tol);
    } catch (const NonConvergent&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  double lo = 0.0;
  double hi;
  if (std::isfinite(phi_star)) {
    hi = phi_star;
  } else {
    hi = std::max(1.0, rho * g(1));
    int guard = 0;
    while (density_or_inf(hi) <= rho) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 200) throw NonConvergent("fugacity: failed to bracket the density");
    }
  }

  // Initial guess from the first-order expansion rho ~ phi / g(1).
  double phi = std::min(rho * g(1), 0.5 * (lo + hi));
  if (!(phi > lo && phi < hi)) phi = 0.5 * (lo + hi);
  const double target_tol = 1e-15 * std::max(1.0, rho);
  for (int it = 0; it < 300; ++it) {
    std::optional<Marginal> m;
    try {
      m = Marginal::from_fugacity(g, phi, tol);
    } catch (const NonConvergent&) {
      hi = phi;
      phi = 0.5 * (lo + hi);
      continue;
    }
    const double resid = m->rho() - rho;
    if (std::abs(resid) <= target_tol) return phi;
    if (resid < 0.0) lo = phi; else hi = phi;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return phi;
    // d rho / d phi = Var / phi
    double next = m->variance() > 0.0 ? phi - resid * phi / m->variance() : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    phi = next;
  }
  std::ostringstream msg;
  msg << "fugacity inversion for rho = " << rho << " did not converge";
  throw NonConvergent(msg.str());
}

double fugacity_derivative(const JumpRate& g, double rho, double tol) {
  if (rho == 0.0) return g(1);
  const Marginal m = Marginal::from_density(g, rho, tol);
  return m.phi() / m.variance();
}

double marginal_pmf(const JumpRate& g, double rho, std::int64_t k, double tol) {
  if (k < 0) return 0.0;
  if (rho == 0.0) return k == 0 ? 1.0 : 0.0;
  return Marginal::from_density(g, rho, tol).pmf(k);
}

int sample_marginal(const JumpRate& g, double rho, Rng& rng) {
  if (rho == 0.0) return 0;
  return Marginal::from_density(g, rho).sample(rng);
}

}  // namespace meancurve
