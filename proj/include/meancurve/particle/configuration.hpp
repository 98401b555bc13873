#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "meancurve/core/lattice.hpp"
#include "meancurve/core/random.hpp"
#include "meancurve/rates/jump_rate.hpp"

namespace meancurve {

/// Particle configuration on a lattice torus at macroscopic time `time`.
struct Configuration {
  LatticeTorus lattice;
  std::vector<std::int32_t> eta;
  std::int64_t total = 0;
  double time = 0.0;

  explicit Configuration(const LatticeTorus& lat) : lattice(lat), eta(lat.size(), 0) {}
  Configuration(const LatticeTorus& lat, std::vector<std::int32_t> occupation, double t = 0.0);

  /// Sum of eta recomputed from scratch.
  std::int64_t recount() const noexcept;
  bool operator==(const Configuration&) const = default;
};

/// Independent draws eta_x ~ nu_{u0(x)}. Requires u0 >= 0 sitewise.
Configuration init_product(const LatticeTorus& lattice, std::span<const double> u0, const JumpRate& g, Rng& rng);

using TestFunction = std::function<double(const Point&)>;

/// N^{-d} sum_x eta_x phi(x / N).
double empirical_pairing(const Configuration& config, const TestFunction& phi);

/// Mean of eta over the box {z : max_i |z_i - x_i| <= ell}, periodic.
/// Requires 0 <= ell < N / 2.
double block_average(const Configuration& config, std::size_t x, int ell);

/// Block averages at every site, computed with running sums along each axis.
std::vector<double> block_average_field(const Configuration& config, int ell);

}  // namespace meancurve
