#pragma once

#include <cmath>
#include <stdexcept>

namespace meancurve {

/// Bisection for a sign change of `f` on [lo, hi]. Returns the midpoint of
/// the final bracket once it is narrower than `xtol` (or an exact zero).
template <class F>
double bisect(F&& f, double lo, double hi, double xtol = 0.0, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw std::invalid_argument("bisect: bracket has no sign change");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= xtol) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace meancurve
