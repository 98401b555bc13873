#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "meancurve/rates/jump_rate.hpp"

namespace meancurve {

/// A local function h(eta) reading the occupations of a finite window.
using LocalFunction = std::function<double(std::span<const int>)>;

struct EnsembleOptions {
  /// Largest number of window states summed exactly.
  std::uint64_t state_budget = 4'000'000;
  bool allow_monte_carlo = true;
  std::uint64_t mc_samples = 200'000;
  std::uint64_t seed = 0x5eed;
  /// Per-site pmf mass discarded when enumerating.
  double enumeration_tail = 1e-15;
};

struct EnsembleEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for exact summation
  bool exact = true;
};

/// E[h] under the homogeneous product measure nu_rho on a window of
/// `window` sites. Exact product-measure summation when the truncated state
/// space fits the budget, Monte Carlo otherwise (WindowTooLarge if disabled).
EnsembleEstimate ensemble_average(const JumpRate& g, const LocalFunction& h, int window, double rho,
                                  const EnsembleOptions& options = {});

}  // namespace meancurve
