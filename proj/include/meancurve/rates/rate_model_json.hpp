#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "meancurve/rates/rate_model.hpp"

namespace meancurve {

/// Declarative form of a JumpRate as it appears in configuration files.
struct JumpRateSpec {
  std::string kind = "linear";  // linear | indicator | capped | table
  double slope = 1.0;           // linear
  int cap = 2;                  // capped
  std::vector<double> table;    // table: g(1..k_max)
  std::string tail = "linear";  // table: linear | constant
  double lipschitz_C = 0.0;     // table: 0 infers the bound

  JumpRate build() const;
  bool operator==(const JumpRateSpec&) const = default;
};

/// Declarative rate model; `a_star_auto` defers a* to calibrate_balance.
struct RateModelSpec {
  JumpRateSpec g;
  GlauberRateSpec glauber;
  bool a_star_auto = false;

  RateModel build(int balance_panels = 64) const;
  bool operator==(const RateModelSpec& o) const {
    return g == o.g && a_star_auto == o.a_star_auto && glauber.C == o.glauber.C &&
           glauber.a_minus == o.glauber.a_minus && glauber.a_plus == o.glauber.a_plus &&
           (a_star_auto || glauber.a_star == o.glauber.a_star) && glauber.offsets == o.glauber.offsets;
  }
};

/// Parses {"g": {...}, "glauber": {...}, "offsets": [...]}. Throws SchemaError
/// naming the offending field (prefixed by `path`).
RateModelSpec rate_model_spec_from_json(const nlohmann::json& j, const std::string& path = "");
nlohmann::json to_json(const RateModelSpec& spec);

}  // namespace meancurve
