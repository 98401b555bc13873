#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "meancurve/interface/potential.hpp"

namespace meancurve {

/// Standing wave U0 on a uniform z-grid: (phi(U0))_zz + f(U0) = 0,
/// U0(-inf) = alpha+, U0(0) = alpha*, U0(+inf) = alpha-.
struct WaveProfile {
  std::vector<double> z;
  std::vector<double> U0;
  std::vector<double> U0_z;
  /// Exponential decay rates sqrt(-f'(alpha)/phi'(alpha)) at alpha+ (z -> -inf) and alpha- (z -> +inf).
  double mu_plus = 0.0;
  double mu_minus = 0.0;

  double spacing() const { return z.size() > 1 ? z[1] - z[0] : 0.0; }
};

struct WaveProfileOptions {
  /// Half width of the z window; 0 picks the largest window the u-grid resolves.
  double z_half_width = 0.0;
  /// Number of z nodes; rounded up to an odd count so that z = 0 is a node.
  int n_nodes = 8193;
  /// Uniform u intervals on each side of alpha* before endpoint clustering.
  int u_intervals_per_side = 256;
  /// Geometric clustering at alpha+-: ratio 0.5 down to this distance.
  double endpoint_gap = 1e-10;
};

/// Builds U0 through z(u) = -int_{alpha*}^u phi'(s) / (sqrt 2 sqrt W(s)) ds and
/// inversion. Throws EndpointSingularity unless f'(alpha-) < 0 and f'(alpha+) < 0.
WaveProfile wave_profile(const PotentialW& W, const WaveProfileOptions& options = {});

/// sup |(phi(U0))_zz + f(U0)| by central differences over the middle `fraction` of the grid.
double profile_residual(const WaveProfile& profile, const Hydrodynamics& hydro, double fraction = 0.9);

/// Least-squares slope of log|U0 - alpha| over the grid nodes with |U0 - alpha|
/// in [lo, hi]; `plus_side` selects alpha+ (z < 0) or alpha- (z > 0).
double measured_tail_rate(const WaveProfile& profile, const Hydrodynamics& hydro, bool plus_side, double lo = 1e-12,
                          double hi = 1e-6);

/// CSV with columns z,U0,U0_z.
void write_profile_csv(const WaveProfile& profile, const std::filesystem::path& path);

}  // namespace meancurve
