#pragma once

#include <optional>
#include <vector>

#include "meancurve/core/lattice.hpp"
#include "meancurve/pde/field.hpp"

namespace meancurve {

/// sqrt(R0^2 - 2 lambda0 (d - 1) t); nullopt once the radicand is <= 0.
std::optional<double> mcf_radius(double t, double R0, int d, double lambda0);

struct InterfaceEstimate {
  /// Crossings of alpha* along lattice edges, by linear interpolation.
  std::vector<Point> points;
  /// Radius of the ball with the same volume as {u > alpha*} (box count).
  double radius = 0.0;
  /// Circular mean of the sites with u > alpha*.
  Point centroid{0, 0, 0};
  std::size_t inside_sites = 0;
};

/// Throws NoCrossing when the field lies entirely on one side of alpha*.
InterfaceEstimate extract_interface(const DensityField& field, double alpha_star);

/// Torus distance to the sphere |v - center| = R; negative inside.
double signed_distance_circle(const Point& v, const Point& center, double R, int d = 2);

}  // namespace meancurve
