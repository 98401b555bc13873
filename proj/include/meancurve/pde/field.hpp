#pragma once

#include <filesystem>
#include <vector>

#include "meancurve/core/lattice.hpp"

namespace meancurve {

/// Density u(x) on the lattice torus at time t.
struct DensityField {
  LatticeTorus lattice;
  std::vector<double> u;
  double t = 0.0;

  explicit DensityField(const LatticeTorus& lat, double value = 0.0) : lattice(lat), u(lat.size(), value) {}
  DensityField(const LatticeTorus& lat, std::vector<double> values, double time = 0.0);

  /// Throws std::invalid_argument unless every value is finite and >= 0.
  void validate() const;
  bool operator==(const DensityField&) const = default;
};

/// Samples u0(x / N) at every site.
template <class Fn>
DensityField sample_field(const LatticeTorus& lat, Fn&& u0) {
  DensityField out(lat);
  for (std::size_t x = 0; x < lat.size(); ++x) out.u[x] = u0(lat.position(x));
  return out;
}

/// Value of the step function at v: the site whose centred box of side 1/N contains v.
double step_function_view(const DensityField& field, const Point& v);

/// CSV `t,x1,..,xd,u` and binary float64 dump with JSON sidecar {d, N, t}.
void write_field_csv(const DensityField& field, const std::filesystem::path& path);
void write_field_binary(const DensityField& field, const std::filesystem::path& path);
DensityField read_field_binary(const std::filesystem::path& path);

}  // namespace meancurve
