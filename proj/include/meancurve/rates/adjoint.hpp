#pragma once

#include <span>

#include "meancurve/core/lattice.hpp"
#include "meancurve/rates/rate_model.hpp"

namespace meancurve {

struct AdjointOne {
  double zero_range;  // L_ZR^{*,nu} 1 (without the N^2 speed-up)
  double glauber;     // L_G^{*,nu} 1
};

/// Adjoints of the zero-range and Glauber generators applied to the constant
/// function 1, in L^2 of the inhomogeneous product measure nu_{u(.)}:
///
///   L_ZR^* 1 = sum_x [sum_{+-e_i} (phi(u(x+-e_i)) - phi(u(x)))] / phi(u(x)) * g(eta_x)
///   L_G^* 1  = sum_x { c_x^+(eta^{x,-}) g(eta_x) / phi(u(x))
///                     + c_x^-(eta^{x,+}) phi(u(x)) / g(eta_x + 1) - c_x^+(eta) - c_x^-(eta) }
///
/// `u` must be strictly positive. Intended for tiny lattices.
AdjointOne adjoint_one(const RateModel& model, const LatticeTorus& lattice, std::span<const double> u,
                       std::span<const int> eta);

/// c_x^+ and c_x^- evaluated on a full configuration.
double creation_rate_at(const RateModel& model, const LatticeTorus& lattice, std::span<const int> eta,
                        std::size_t x);
double annihilation_rate_at(const RateModel& model, const LatticeTorus& lattice, std::span<const int> eta,
                            std::size_t x);

}  // namespace meancurve
