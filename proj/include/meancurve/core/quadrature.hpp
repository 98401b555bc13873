#pragma once

#include <array>
#include <functional>
#include <vector>

namespace meancurve {

/// 10-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre10 {
  static constexpr std::array<double, 5> abscissa{
      0.1488743389816312108848260, 0.4333953941292471907992659, 0.6794095682990244062343274,
      0.8650633666889845107320967, 0.9739065285171717200779640};
  static constexpr std::array<double, 5> weight{
      0.2955242247147528701738930, 0.2692667193099963550912269, 0.2190863625159820439955349,
      0.1494513491505805931457763, 0.0666713443086881375935688};
};

/// Composite 10-point Gauss-Legendre over `panels` equal panels of [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b, int panels = 1) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    double s = 0.0;
    for (std::size_t j = 0; j < GaussLegendre10::abscissa.size(); ++j) {
      const double dx = half * GaussLegendre10::abscissa[j];
      s += GaussLegendre10::weight[j] * (f(mid - dx) + f(mid + dx));
    }
    sum += s * half;
  }
  return sum;
}

/// Node/weight table of the composite rule, for integrands that are reused
/// many times with a varying parameter.
struct QuadratureNodes {
  std::vector<double> x;
  std::vector<double> w;
};
QuadratureNodes gauss_legendre_nodes(double a, double b, int panels);

/// Globally adaptive Gauss-Kronrod (G10/K21) quadrature. Throws
/// QuadratureFailure unless the error estimate reaches max(abs_tol, rel_tol |I|),
/// allowing one decade of slack when round-off stalls refinement.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-300, double* error_estimate = nullptr);

}  // namespace meancurve
