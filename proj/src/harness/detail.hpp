#pragma once

#include <cstdio>
#include <initializer_list>
#include <memory>
#include <string>
#include <utility>

#include "meancurve/harness/config.hpp"
#include "meancurve/pde/hydro_table.hpp"

namespace meancurve::detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// "base[k1=v1;k2=v2]"
inline std::string tag(const std::string& base, std::initializer_list<std::pair<const char*, double>> keys) {
  std::string s = base + "[";
  bool first = true;
  for (const auto& [k, v] : keys) {
    if (!first) s += ";";
    s += std::string(k) + "=" + num(v);
    first = false;
  }
  return s + "]";
}

/// Table covering u0 and the stable zeros.
inline std::shared_ptr<const HydroTable> table_for(std::shared_ptr<const Hydrodynamics> hydro,
                                                   const std::vector<double>& u0) {
  double lo = u0.front(), hi = u0.front();
  for (double v : u0) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return HydroTable::on_invariant_interval(std::move(hydro), lo, hi);
}

}  // namespace meancurve::detail
