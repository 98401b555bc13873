#include "meancurve/rates/ensemble.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/random.hpp"
#include "meancurve/rates/marginal.hpp"

namespace meancurve {

EnsembleEstimate ensemble_average(const JumpRate& g, const LocalFunction& h, int window, double rho,
                                  const EnsembleOptions& options) {
  if (window < 1) throw std::invalid_argument("ensemble_average: window must contain at least one site");
  const Marginal m = rho == 0.0 ? Marginal::from_fugacity(g, 0.0) : Marginal::from_density(g, rho);

  // Per-site support: drop the far tail once its mass is below enumeration_tail.
  const auto& pmf = m.pmf();
  std::size_t support = pmf.size();
  double tail = 0.0;
  while (support > 1 && tail + pmf[support - 1] < options.enumeration_tail) tail += pmf[--support];

  double states = 1.0;
  for (int i = 0; i < window; ++i) states *= static_cast<double>(support);

  if (states <= static_cast<double>(options.state_budget)) {
    std::vector<int> eta(window, 0);
    double total = 0.0;
    double mass = 0.0;
    while (true) {
      double w = 1.0;
      for (int v : eta) w *= pmf[v];
      total += w * h(eta);
      mass += w;
      int i = 0;
      while (i < window && ++eta[i] == static_cast<int>(support)) eta[i++] = 0;
      if (i == window) break;
    }
    return {total / mass, 0.0, true};
  }

  if (!options.allow_monte_carlo) {
    std::ostringstream msg;
    msg << "window of " << window << " sites has " << states << " states, budget " << options.state_budget;
    throw WindowTooLarge(msg.str());
  }
  Rng rng(options.seed);
  std::vector<int> eta(window);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t n = 1; n <= options.mc_samples; ++n) {
    for (auto& v : eta) v = m.sample(rng);
    const double x = h(eta);
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(options.mc_samples);
  return {mean, std::sqrt(m2 / (n - 1.0) / n), false};
}

}  // namespace meancurve
