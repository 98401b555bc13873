#pragma once

#include <functional>

#include "meancurve/rates/hydrodynamics.hpp"

namespace meancurve {

class RateModel;

/// Locates the three zeros of a bistable f on [lo, hi]: sign changes are
/// detected on a uniform scan grid and each one is refined by bisection.
/// Throws BistabilityViolated unless there are exactly three sign changes
/// with derivative signs (-, +, -).
ReactionZeros find_zeros(const std::function<double(double)>& f, double lo, double hi, int scan_points = 512);

/// Integral of f phi' over [alpha_minus, alpha_plus] by composite
/// Gauss-Legendre with the given number of panels.
double balance_integral(const Hydrodynamics& hydro, int panels = 64);

/// One-parameter family of reactions f(a, rho) whose outer zeros do not move
/// with a. Finds a in (a_lo, a_hi) with int_{alpha_minus}^{alpha_plus}
/// f(a, rho) phi'(rho) d rho = 0 by bisection. The integral must be positive
/// near a_lo and negative near a_hi (NoSignChange otherwise).
double calibrate_balance(const std::function<double(double, double)>& f_family,
                         const std::function<double(double)>& phi_prime, double alpha_minus, double alpha_plus,
                         double a_lo, double a_hi, int panels = 64);

/// Chooses a* in (a-, a+) for the example Glauber family so that the
/// phi-balance condition holds. a* of `model` is ignored.
double calibrate_balance(const RateModel& model, int panels = 64);

}  // namespace meancurve
