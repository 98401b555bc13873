#include "meancurve/rates/adjoint.hpp"

#include <stdexcept>
#include <vector>

namespace meancurve {
namespace {

std::array<std::size_t, 3> window_sites(const RateModel& model, const LatticeTorus& lattice, std::size_t x) {
  const auto e = model.offsets(lattice.dim());
  return {lattice.shift(x, e[0]), lattice.shift(x, e[1]), lattice.shift(x, e[2])};
}

}  // namespace

double creation_rate_at(const RateModel& model, const LatticeTorus& lattice, std::span<const int> eta,
                        std::size_t x) {
  const auto w = window_sites(model, lattice, x);
  return model.creation_rate(eta[x], eta[w[0]], eta[w[1]], eta[w[2]]);
}

double annihilation_rate_at(const RateModel& model, const LatticeTorus& lattice, std::span<const int> eta,
                            std::size_t x) {
  const auto w = window_sites(model, lattice, x);
  return model.annihilation_rate(eta[x], eta[w[0]], eta[w[1]], eta[w[2]]);
}

AdjointOne adjoint_one(const RateModel& model, const LatticeTorus& lattice, std::span<const double> u,
                       std::span<const int> eta) {
  const std::size_t n = lattice.size();
  if (u.size() != n || eta.size() != n) throw std::invalid_argument("adjoint_one: size mismatch with lattice");
  const JumpRate& g = model.jump_rate();

  std::vector<double> phi(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (!(u[x] > 0.0)) throw std::invalid_argument("adjoint_one: densities must be positive");
    phi[x] = model.phi(u[x]);
  }

  AdjointOne out{0.0, 0.0};
  std::vector<int> work(eta.begin(), eta.end());
  for (std::size_t x = 0; x < n; ++x) {
    double stencil = 0.0;
    for (auto y : lattice.neighbors(x)) stencil += phi[y] - phi[x];
    out.zero_range += stencil / phi[x] * g(eta[x]);

    double term = -creation_rate_at(model, lattice, eta, x) - annihilation_rate_at(model, lattice, eta, x);
    if (eta[x] >= 1) {
      work[x] = eta[x] - 1;
      term += creation_rate_at(model, lattice, work, x) * g(eta[x]) / phi[x];
    }
    work[x] = eta[x] + 1;
    term += annihilation_rate_at(model, lattice, work, x) * phi[x] / g(eta[x] + 1);
    work[x] = eta[x];
    out.glauber += term;
  }
  return out;
}

}  // namespace meancurve
