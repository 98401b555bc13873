#include "meancurve/interface/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "meancurve/core/errors.hpp"

namespace meancurve {

std::optional<double> mcf_radius(double t, double R0, int d, double lambda0) {
  if (!(R0 > 0.0) || d < 2) throw std::invalid_argument("mcf_radius: need R0 > 0 and d >= 2");
  const double radicand = R0 * R0 - 2.0 * lambda0 * (d - 1) * t;
  if (radicand <= 0.0) return std::nullopt;
  return std::sqrt(radicand);
}

InterfaceEstimate extract_interface(const DensityField& field, double alpha_star) {
  const auto& lat = field.lattice;
  const auto& u = field.u;
  const int d = lat.dim();
  const double N = lat.side();
  InterfaceEstimate out;
  std::array<double, 3> cs{0, 0, 0}, sn{0, 0, 0};
  for (std::size_t x = 0; x < u.size(); ++x) {
    const bool in = u[x] > alpha_star;
    if (in) {
      ++out.inside_sites;
      const auto p = lat.position(x);
      for (int i = 0; i < d; ++i) {
        cs[i] += std::cos(2 * std::numbers::pi * p[i]);
        sn[i] += std::sin(2 * std::numbers::pi * p[i]);
      }
    }
    for (int i = 0; i < d; ++i) {
      const auto y = lat.neighbor(x, i, true);
      if (in == (u[y] > alpha_star)) continue;
      const double theta = (u[x] - alpha_star) / (u[x] - u[y]);
      Point p = lat.position(x);
      p[i] += theta / N;
      if (p[i] >= 1.0) p[i] -= 1.0;
      out.points.push_back(p);
    }
  }
  if (out.inside_sites == 0 || out.inside_sites == u.size())
    throw NoCrossing("field does not cross alpha* = " + std::to_string(alpha_star));
  const double volume = static_cast<double>(out.inside_sites) / static_cast<double>(u.size());
  if (d == 1) out.radius = volume / 2;
  if (d == 2) out.radius = std::sqrt(volume / std::numbers::pi);
  if (d == 3) out.radius = std::cbrt(3.0 * volume / (4.0 * std::numbers::pi));
  for (int i = 0; i < d; ++i) {
    double a = std::atan2(sn[i], cs[i]) / (2 * std::numbers::pi);
    if (a < 0) a += 1.0;
    out.centroid[i] = a;
  }
  return out;
}

double signed_distance_circle(const Point& v, const Point& center, double R, int d) {
  if (!(R > 0.0)) throw std::invalid_argument("signed_distance_circle: R must be positive");
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double g = std::abs(v[i] - center[i]);
    g -= std::floor(g);
    g = std::min(g, 1.0 - g);
    s += g * g;
  }
  return std::sqrt(s) - R;
}

}  // namespace meancurve
