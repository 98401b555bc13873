#include "meancurve/core/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <exception>
#include <memory>
#include <sstream>

#include "meancurve/core/errors.hpp"

namespace meancurve {

QuadratureNodes gauss_legendre_nodes(double a, double b, int panels) {
  QuadratureNodes q;
  q.x.reserve(10 * panels);
  q.w.reserve(10 * panels);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    for (std::size_t j = 0; j < GaussLegendre10::abscissa.size(); ++j) {
      const double dx = half * GaussLegendre10::abscissa[j];
      q.x.push_back(mid - dx);
      q.w.push_back(half * GaussLegendre10::weight[j]);
      q.x.push_back(mid + dx);
      q.w.push_back(half * GaussLegendre10::weight[j]);
    }
  }
  return q;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          double abs_tol, double* error_estimate) {
  if (a == b) {
    if (error_estimate) *error_estimate = 0.0;
    return 0.0;
  }
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  constexpr std::size_t kMaxIntervals = 2000;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(kMaxIntervals), &gsl_integration_workspace_free);
  std::exception_ptr pending;
  auto thunk = [&](double x) {
    try {
      return f(x);
    } catch (...) {
      if (!pending) pending = std::current_exception();
      return 0.0;
    }
  };
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<decltype(thunk)*>(p))(x); };
  F.params = &thunk;
  double value = 0.0, err = 0.0;
  const int status = gsl_integration_qag(&F, a, b, abs_tol, rel_tol, kMaxIntervals, GSL_INTEG_GAUSS21, ws.get(),
                                         &value, &err);
  if (pending) std::rethrow_exception(pending);
  if (error_estimate) *error_estimate = err;
  // Round-off limited results are accepted within one decade of the request.
  if (!std::isfinite(value) || (status != GSL_SUCCESS && err > 10.0 * rel_tol * std::abs(value) + abs_tol)) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge (" << gsl_strerror(status)
        << ", error " << err << ", value " << value << ")";
    throw QuadratureFailure(msg.str());
  }
  return value;
}

}  // namespace meancurve
