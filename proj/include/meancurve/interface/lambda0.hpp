#pragma once

#include "meancurve/interface/potential.hpp"
#include "meancurve/interface/wave_profile.hpp"

namespace meancurve {

/// int phi' sqrt W du / int sqrt W du over [alpha-, alpha+].
double lambda0_intrinsic(const PotentialW& W);

struct ProfileIntegrals {
  double numerator = 0.0;    // int (phi'(U0) U0_z)^2 dz
  double denominator = 0.0;  // int phi'(U0) U0_z^2 dz
  double tail_estimate = 0.0;
};

/// Trapezoid sums of both profile integrals, with the exponential tail beyond
/// the window estimated as end value / (2 mu).
ProfileIntegrals profile_integrals(const WaveProfile& profile, const Hydrodynamics& hydro);

/// numerator / denominator of profile_integrals. Throws TailUnresolved if the
/// tail estimate exceeds `tail_tol` times either integral.
double lambda0_profile(const WaveProfile& profile, const Hydrodynamics& hydro, double tail_tol = 1e-6);

struct FlowConstant {
  double lambda0_intrinsic = 0.0;
  double lambda0_profile = 0.0;
  double balance_residual = 0.0;
  double profile_residual = 0.0;

  double relative_gap() const;
};

FlowConstant flow_constant(std::shared_ptr<const Hydrodynamics> hydro, const WaveProfileOptions& options = {});

}  // namespace meancurve
