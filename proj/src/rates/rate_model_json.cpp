#include "meancurve/rates/rate_model_json.hpp"

#include "meancurve/core/json_schema.hpp"
#include "meancurve/rates/reaction.hpp"

namespace meancurve {

using nlohmann::json;
namespace sc = schema;

JumpRate JumpRateSpec::build() const {
  if (kind == "linear") return JumpRate::linear(slope);
  if (kind == "indicator") return JumpRate::indicator();
  if (kind == "capped") return JumpRate::capped(cap);
  if (kind == "table")
    return JumpRate::tabulated(table, tail == "constant" ? JumpRate::Tail::Constant : JumpRate::Tail::Linear,
                               lipschitz_C);
  throw std::invalid_argument("unknown jump rate kind '" + kind + "'");
}

RateModel RateModelSpec::build(int balance_panels) const {
  if (!a_star_auto) return RateModel(g.build(), glauber);
  GlauberRateSpec provisional = glauber;
  provisional.a_star = 0.5 * (glauber.a_minus + glauber.a_plus);
  const RateModel base(g.build(), provisional);
  return base.with_a_star(calibrate_balance(base, balance_panels));
}

namespace {

JumpRateSpec jump_rate_from_json(const json& j, const std::string& path) {
  JumpRateSpec s;
  sc::only_keys(j, path, {"kind", "slope", "cap", "table", "tail", "C"});
  s.kind = sc::string(sc::required(j, path, "kind"), sc::join(path, "kind"));
  if (s.kind == "linear") {
    s.slope = sc::number_or(j, path, "slope", 1.0);
  } else if (s.kind == "capped") {
    s.cap = static_cast<int>(sc::integer(sc::required(j, path, "cap"), sc::join(path, "cap")));
  } else if (s.kind == "table") {
    const auto& t = sc::required(j, path, "table");
    if (!t.is_array() || t.empty()) throw SchemaError(sc::join(path, "table"), "expected a nonempty array");
    for (std::size_t i = 0; i < t.size(); ++i)
      s.table.push_back(sc::number(t[i], sc::join(path, "table/" + std::to_string(i))));
    if (j.contains("tail")) {
      s.tail = sc::string(j["tail"], sc::join(path, "tail"));
      if (s.tail != "linear" && s.tail != "constant")
        throw SchemaError(sc::join(path, "tail"), "expected 'linear' or 'constant'");
    }
    s.lipschitz_C = sc::number_or(j, path, "C", 0.0);
  } else if (s.kind != "indicator") {
    throw SchemaError(sc::join(path, "kind"), "unknown jump rate kind '" + s.kind + "'");
  }
  return s;
}

}  // namespace

RateModelSpec rate_model_spec_from_json(const json& j, const std::string& path) {
  RateModelSpec spec;
  sc::only_keys(j, path, {"g", "glauber", "offsets"});
  spec.g = jump_rate_from_json(sc::required(j, path, "g"), sc::join(path, "g"));

  const std::string gp = sc::join(path, "glauber");
  const json& gl = sc::required(j, path, "glauber");
  sc::only_keys(gl, gp, {"C", "a_minus", "a_plus", "a_star"});
  spec.glauber.C = sc::number_or(gl, gp, "C", 1.0);
  spec.glauber.a_minus = sc::number(sc::required(gl, gp, "a_minus"), sc::join(gp, "a_minus"));
  spec.glauber.a_plus = sc::number(sc::required(gl, gp, "a_plus"), sc::join(gp, "a_plus"));
  const json& as = sc::required(gl, gp, "a_star");
  if (as.is_string()) {
    if (as.get<std::string>() != "auto") throw SchemaError(sc::join(gp, "a_star"), "expected a number or \"auto\"");
    spec.a_star_auto = true;
    spec.glauber.a_star = 0.5 * (spec.glauber.a_minus + spec.glauber.a_plus);
  } else {
    spec.glauber.a_star = sc::number(as, sc::join(gp, "a_star"));
  }

  if (j.contains("offsets")) {
    const std::string op = sc::join(path, "offsets");
    const json& o = j["offsets"];
    if (!o.is_array() || o.size() != 3) throw SchemaError(op, "expected three offsets");
    for (std::size_t i = 0; i < 3; ++i) {
      const std::string ip = sc::join(op, std::to_string(i));
      if (!o[i].is_array() || o[i].empty() || o[i].size() > 3) throw SchemaError(ip, "expected 1 to 3 integers");
      Offset e{0, 0, 0};
      for (std::size_t k = 0; k < o[i].size(); ++k)
        e[k] = static_cast<int>(sc::integer(o[i][k], sc::join(ip, std::to_string(k))));
      spec.glauber.offsets.push_back(e);
    }
  }
  try {
    spec.glauber.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(gp, e.what());
  }
  return spec;
}

json to_json(const RateModelSpec& spec) {
  json g{{"kind", spec.g.kind}};
  if (spec.g.kind == "linear") g["slope"] = spec.g.slope;
  if (spec.g.kind == "capped") g["cap"] = spec.g.cap;
  if (spec.g.kind == "table") {
    g["table"] = spec.g.table;
    g["tail"] = spec.g.tail;
    if (spec.g.lipschitz_C > 0.0) g["C"] = spec.g.lipschitz_C;
  }
  json gl{{"C", spec.glauber.C}, {"a_minus", spec.glauber.a_minus}, {"a_plus", spec.glauber.a_plus}};
  if (spec.a_star_auto) gl["a_star"] = "auto"; else gl["a_star"] = spec.glauber.a_star;
  json j{{"g", g}, {"glauber", gl}};
  if (!spec.glauber.offsets.empty()) {
    json o = json::array();
    for (const auto& e : spec.glauber.offsets) o.push_back({e[0], e[1], e[2]});
    j["offsets"] = o;
  }
  return j;
}

}  // namespace meancurve
