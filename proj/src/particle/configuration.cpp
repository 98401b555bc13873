#include "meancurve/particle/configuration.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "meancurve/rates/marginal.hpp"

namespace meancurve {

Configuration::Configuration(const LatticeTorus& lat, std::vector<std::int32_t> occupation, double t)
    : lattice(lat), eta(std::move(occupation)), time(t) {
  if (eta.size() != lattice.size()) throw std::invalid_argument("Configuration: occupation size does not match lattice");
  for (auto v : eta)
    if (v < 0) throw std::invalid_argument("Configuration: negative occupation");
  total = recount();
}

std::int64_t Configuration::recount() const noexcept {
  return std::accumulate(eta.begin(), eta.end(), std::int64_t{0});
}

Configuration init_product(const LatticeTorus& lattice, std::span<const double> u0, const JumpRate& g, Rng& rng) {
  if (u0.size() != lattice.size()) throw std::invalid_argument("init_product: profile size does not match lattice");
  std::unordered_map<double, Marginal> cache;
  Configuration out(lattice);
  for (std::size_t x = 0; x < u0.size(); ++x) {
    const double u = u0[x];
    if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("init_product: densities must be finite and nonnegative");
    if (u == 0.0) continue;
    auto it = cache.find(u);
    if (it == cache.end()) it = cache.emplace(u, Marginal::from_density(g, u)).first;
    out.eta[x] = it->second.sample(rng);
  }
  out.total = out.recount();
  return out;
}

double empirical_pairing(const Configuration& config, const TestFunction& phi) {
  double s = 0.0;
  for (std::size_t x = 0; x < config.eta.size(); ++x)
    if (config.eta[x] != 0) s += config.eta[x] * phi(config.lattice.position(x));
  return s / static_cast<double>(config.lattice.size());
}

double block_average(const Configuration& config, std::size_t x, int ell) {
  const auto& lat = config.lattice;
  if (ell < 0 || 2 * ell >= lat.side()) throw std::invalid_argument("block_average: need 0 <= ell < N/2");
  const int d = lat.dim();
  const int w = 2 * ell + 1;
  std::int64_t sum = 0;
  std::int64_t count = 1;
  for (int i = 0; i < d; ++i) count *= w;
  for (std::int64_t k = 0; k < count; ++k) {
    Offset e{0, 0, 0};
    std::int64_t r = k;
    for (int i = 0; i < d; ++i) {
      e[i] = static_cast<int>(r % w) - ell;
      r /= w;
    }
    sum += config.eta[lat.shift(x, e)];
  }
  return static_cast<double>(sum) / static_cast<double>(count);
}

std::vector<double> block_average_field(const Configuration& config, int ell) {
  const auto& lat = config.lattice;
  if (ell < 0 || 2 * ell >= lat.side()) throw std::invalid_argument("block_average_field: need 0 <= ell < N/2");
  std::vector<double> cur(config.eta.begin(), config.eta.end());
  std::vector<double> next(cur.size());
  for (int axis = 0; axis < lat.dim(); ++axis) {
    for (std::size_t x = 0; x < cur.size(); ++x) {
      double s = cur[x];
      std::size_t up = x, down = x;
      for (int k = 0; k < ell; ++k) {
        up = lat.neighbor(up, axis, true);
        down = lat.neighbor(down, axis, false);
        s += cur[up] + cur[down];
      }
      next[x] = s / (2 * ell + 1);
    }
    cur.swap(next);
  }
  return cur;
}

}  // namespace meancurve
