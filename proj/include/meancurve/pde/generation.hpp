#pragma once

#include <utility>

#include "meancurve/pde/field.hpp"
#include "meancurve/pde/hydro_table.hpp"

namespace meancurve {

/// Y(tau) for Y' = f(Y), Y(0) = zeta >= 0, via adaptive Dormand-Prince 5(4).
/// The result is clipped to [min(zeta, alpha-), max(zeta, alpha+)].
double ode_Y(double tau_end, double zeta, const Hydrodynamics& reaction, double tol = 1e-11);

/// log K / (2 gamma K).
double generation_time(double K, double gamma);

/// 2 max|f| / gamma.
double default_C4(const HydroTable& table);

/// P(t) = C4 (exp(gamma K t) - 1) / K.
double envelope_shift(double C4, double gamma, double K, double t);

struct Envelopes {
  DensityField lower;
  DensityField upper;
};

/// w-(t,x) = Y(Kt, u0(x) - P(t)), w+(t,x) = Y(Kt, u0(x) + P(t)), with the
/// shifted initial value clamped to [table.lo(), table.hi()]. The clamp
/// replaces w+ by min(w+, Y(Kt, hi)) and w- by max(w-, Y(Kt, lo)), which are
/// still super- and subsolutions since constants evolve by the ODE.
Envelopes generation_envelopes(const DensityField& u0, double K, double C4, double t, const HydroTable& table);

}  // namespace meancurve
