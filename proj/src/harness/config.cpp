#include "meancurve/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/json_schema.hpp"
#include "meancurve/interface/geometry.hpp"
#include "meancurve/rates/rate_model.hpp"

namespace meancurve {

using nlohmann::json;
namespace sc = schema;

std::shared_ptr<const Hydrodynamics> ModelConfig::hydrodynamics() const {
  if (kind == "linear_cubic")
    return std::make_shared<SyntheticHydrodynamics>(
        SyntheticHydrodynamics::linear_cubic(a_minus, a_star, a_plus, scale));
  return std::make_shared<ParticleHydrodynamics>(particle.build());
}

RateModel ModelConfig::rate_model() const {
  if (kind != "particle") throw SchemaError("/model/kind", "'" + kind + "' has no particle system");
  return particle.build();
}

bool ModelConfig::operator==(const ModelConfig& o) const {
  if (kind != o.kind || label != o.label) return false;
  if (kind == "linear_cubic")
    return a_minus == o.a_minus && a_star == o.a_star && a_plus == o.a_plus && scale == o.scale;
  return particle == o.particle;
}

bool InitialProfile::operator==(const InitialProfile& o) const {
  if (kind != o.kind) return false;
  if (kind == "constant") return value == o.value;
  if (kind == "two_phase") return low == o.low && high == o.high && split == o.split;
  if (kind == "cosine") return low == o.low && high == o.high && mode == o.mode;
  if (kind == "table") return table == o.table;
  return center == o.center && radius == o.radius && width == o.width && inside == o.inside && outside == o.outside;
}

double InitialProfile::operator()(const Point& v, int d) const {
  if (kind == "constant") return value;
  if (kind == "two_phase") return v[0] < split ? high : low;
  if (kind == "cosine") return 0.5 * (high + low) + 0.5 * (high - low) * std::cos(2.0 * std::numbers::pi * mode * v[0]);
  if (kind == "table") {
    const double s = v[0] * static_cast<double>(table.size());
    const auto i = static_cast<std::size_t>(std::floor(s)) % table.size();
    const double t = s - std::floor(s);
    return (1.0 - t) * table[i] + t * table[(i + 1) % table.size()];
  }
  const double sd = signed_distance_circle(v, center, radius, d);
  if (width <= 0.0) return sd < 0.0 ? inside : outside;
  const double s = 0.5 * (1.0 - std::tanh(sd / width));
  return outside + (inside - outside) * s;
}

DensityField InitialProfile::sample(const LatticeTorus& lattice) const {
  const int d = lattice.dim();
  return sample_field(lattice, [&](const Point& v) { return (*this)(v, d); });
}

void InitialProfile::check_transversality(const LatticeTorus& lattice, double alpha_star) const {
  if (kind != "disk") return;
  if ((inside - alpha_star) * (outside - alpha_star) >= 0.0)
    throw SchemaError("/initial", "disk levels must lie on opposite sides of alpha* = " + std::to_string(alpha_star));
  const double gap = 0.5 * std::min(std::abs(inside - alpha_star), std::abs(outside - alpha_star));
  const double band = 1.5 * std::max(width, 1.0 / lattice.side());
  for (std::size_t x = 0; x < lattice.size(); ++x) {
    const Point v = lattice.position(x);
    if (std::abs((*this)(v, lattice.dim()) - alpha_star) >= gap) continue;
    if (std::abs(signed_distance_circle(v, center, radius, lattice.dim())) > band)
      throw SchemaError("/initial", "|u0 - alpha*| < gap outside the transition annulus");
  }
}

namespace {

ModelConfig model_from_json(const json& j, const std::string& path) {
  sc::require_object(j, path);
  ModelConfig m;
  if (j.contains("kind")) m.kind = sc::string(j["kind"], sc::join(path, "kind"));
  if (j.contains("label")) m.label = sc::string(j["label"], sc::join(path, "label"));
  if (m.kind == "linear_cubic") {
    sc::only_keys(j, path, {"kind", "label", "a_minus", "a_star", "a_plus", "scale"});
    m.a_minus = sc::number(sc::required(j, path, "a_minus"), sc::join(path, "a_minus"));
    m.a_star = sc::number(sc::required(j, path, "a_star"), sc::join(path, "a_star"));
    m.a_plus = sc::number(sc::required(j, path, "a_plus"), sc::join(path, "a_plus"));
    m.scale = sc::number_or(j, path, "scale", 1.0);
    if (!(0.0 <= m.a_minus && m.a_minus < m.a_star && m.a_star < m.a_plus) || !(m.scale > 0.0))
      throw SchemaError(path, "need 0 <= a_minus < a_star < a_plus and scale > 0");
  } else if (m.kind == "particle") {
    json rest = j;
    rest.erase("kind");
    rest.erase("label");
    m.particle = rate_model_spec_from_json(rest, path);
  } else {
    throw SchemaError(sc::join(path, "kind"), "unknown model kind '" + m.kind + "'");
  }
  return m;
}

json to_json(const ModelConfig& m) {
  json j;
  if (m.kind == "linear_cubic")
    j = {{"a_minus", m.a_minus}, {"a_star", m.a_star}, {"a_plus", m.a_plus}, {"scale", m.scale}};
  else
    j = to_json(m.particle);
  j["kind"] = m.kind;
  if (!m.label.empty()) j["label"] = m.label;
  return j;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(sc::number(j[i], sc::join(path, std::to_string(i))));
  } else {
    out.push_back(sc::number(j, path));
  }
  if (out.empty()) throw SchemaError(path, "expected a number or a nonempty array");
  return out;
}

Point point_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw SchemaError(path, "expected 1 to 3 numbers");
  Point p{0.5, 0.5, 0.5};
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = sc::number(j[i], sc::join(path, std::to_string(i)));
  return p;
}

InitialProfile initial_from_json(const json& j, const std::string& path) {
  sc::require_object(j, path);
  InitialProfile p;
  p.kind = sc::string(sc::required(j, path, "kind"), sc::join(path, "kind"));
  if (p.kind == "constant") {
    sc::only_keys(j, path, {"kind", "value"});
    p.value = sc::number(sc::required(j, path, "value"), sc::join(path, "value"));
  } else if (p.kind == "two_phase") {
    sc::only_keys(j, path, {"kind", "low", "high", "split"});
    p.low = sc::number(sc::required(j, path, "low"), sc::join(path, "low"));
    p.high = sc::number(sc::required(j, path, "high"), sc::join(path, "high"));
    p.split = sc::number_or(j, path, "split", 0.5);
  } else if (p.kind == "cosine") {
    sc::only_keys(j, path, {"kind", "low", "high", "mode"});
    p.low = sc::number(sc::required(j, path, "low"), sc::join(path, "low"));
    p.high = sc::number(sc::required(j, path, "high"), sc::join(path, "high"));
    p.mode = static_cast<int>(sc::integer_or(j, path, "mode", 1));
  } else if (p.kind == "disk") {
    sc::only_keys(j, path, {"kind", "center", "radius", "width", "inside", "outside"});
    if (j.contains("center")) p.center = point_from_json(j["center"], sc::join(path, "center"));
    p.radius = sc::number(sc::required(j, path, "radius"), sc::join(path, "radius"));
    p.width = sc::number_or(j, path, "width", 0.0);
    p.inside = sc::number(sc::required(j, path, "inside"), sc::join(path, "inside"));
    p.outside = sc::number(sc::required(j, path, "outside"), sc::join(path, "outside"));
    if (!(p.radius > 0.0 && p.radius < 0.5)) throw SchemaError(sc::join(path, "radius"), "expected 0 < radius < 0.5");
    if (p.width < 0.0) throw SchemaError(sc::join(path, "width"), "expected width >= 0");
  } else if (p.kind == "table") {
    sc::only_keys(j, path, {"kind", "values"});
    p.table = number_list(sc::required(j, path, "values"), sc::join(path, "values"));
  } else {
    throw SchemaError(sc::join(path, "kind"), "unknown initial profile kind '" + p.kind + "'");
  }
  for (double v : {p.value, p.low, p.high, p.inside, p.outside})
    if (!(v >= 0.0) || !std::isfinite(v)) throw SchemaError(path, "densities must be finite and >= 0");
  for (double v : p.table)
    if (!(v >= 0.0) || !std::isfinite(v)) throw SchemaError(sc::join(path, "values"), "densities must be finite and >= 0");
  return p;
}

json to_json(const InitialProfile& p) {
  json j{{"kind", p.kind}};
  if (p.kind == "constant") j["value"] = p.value;
  if (p.kind == "two_phase") j.update({{"low", p.low}, {"high", p.high}, {"split", p.split}});
  if (p.kind == "cosine") j.update({{"low", p.low}, {"high", p.high}, {"mode", p.mode}});
  if (p.kind == "disk")
    j.update({{"center", {p.center[0], p.center[1], p.center[2]}},
              {"radius", p.radius},
              {"width", p.width},
              {"inside", p.inside},
              {"outside", p.outside}});
  if (p.kind == "table") j["values"] = p.table;
  return j;
}

ExperimentParams params_from_json(const json& j, const std::string& path) {
  sc::only_keys(j, path,
                {"safety", "max_events", "block_ell", "delta", "M0", "C4", "C4_doublings", "envelope_times",
                 "min_coverage", "stop_radius", "radius_tolerance", "control_factor", "control_threshold",
                 "far_field_factor", "far_field_delta", "lambda0_tolerance"});
  ExperimentParams p;
  p.safety = sc::number_or(j, path, "safety", p.safety);
  if (!(p.safety > 0.0 && p.safety <= 1.0)) throw SchemaError(sc::join(path, "safety"), "expected 0 < safety <= 1");
  p.max_events = sc::integer_or(j, path, "max_events", p.max_events);
  p.block_ell = static_cast<int>(sc::integer_or(j, path, "block_ell", p.block_ell));
  p.delta = sc::number_or(j, path, "delta", p.delta);
  if (j.contains("M0")) p.M0 = number_list(j["M0"], sc::join(path, "M0"));
  p.C4 = sc::number_or(j, path, "C4", p.C4);
  p.C4_doublings = static_cast<int>(sc::integer_or(j, path, "C4_doublings", p.C4_doublings));
  p.envelope_times = static_cast<int>(sc::integer_or(j, path, "envelope_times", p.envelope_times));
  p.min_coverage = sc::number_or(j, path, "min_coverage", p.min_coverage);
  p.stop_radius = sc::number_or(j, path, "stop_radius", p.stop_radius);
  p.radius_tolerance = sc::number_or(j, path, "radius_tolerance", p.radius_tolerance);
  p.control_factor = sc::number_or(j, path, "control_factor", p.control_factor);
  p.control_threshold = sc::number_or(j, path, "control_threshold", p.control_threshold);
  p.far_field_factor = sc::number_or(j, path, "far_field_factor", p.far_field_factor);
  p.far_field_delta = sc::number_or(j, path, "far_field_delta", p.far_field_delta);
  p.lambda0_tolerance = sc::number_or(j, path, "lambda0_tolerance", p.lambda0_tolerance);
  return p;
}

json to_json(const ExperimentParams& p) {
  return {{"safety", p.safety},
          {"max_events", p.max_events},
          {"block_ell", p.block_ell},
          {"delta", p.delta},
          {"M0", p.M0},
          {"C4", p.C4},
          {"C4_doublings", p.C4_doublings},
          {"envelope_times", p.envelope_times},
          {"min_coverage", p.min_coverage},
          {"stop_radius", p.stop_radius},
          {"radius_tolerance", p.radius_tolerance},
          {"control_factor", p.control_factor},
          {"control_threshold", p.control_threshold},
          {"far_field_factor", p.far_field_factor},
          {"far_field_delta", p.far_field_delta},
          {"lambda0_tolerance", p.lambda0_tolerance}};
}

const char* const kExperiments[] = {"sim", "pde", "hydro", "generation", "propagation", "lambda0"};

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  sc::only_keys(j, "", {"experiment", "model", "models", "lattice", "K", "initial", "T", "snapshot_every",
                        "replicas", "seed", "output", "params"});
  ExperimentConfig c;
  c.experiment = sc::string(sc::required(j, "", "experiment"), "/experiment");
  bool known = false;
  for (const char* e : kExperiments) known = known || c.experiment == e;
  if (!known) throw SchemaError("/experiment", "unknown experiment '" + c.experiment + "'");

  if (j.contains("model") == j.contains("models")) throw SchemaError("/model", "give exactly one of model, models");
  c.models.clear();
  if (j.contains("model")) {
    c.models.push_back(model_from_json(j["model"], "/model"));
  } else {
    const json& ms = j["models"];
    if (!ms.is_array() || ms.empty()) throw SchemaError("/models", "expected a nonempty array");
    for (std::size_t i = 0; i < ms.size(); ++i) c.models.push_back(model_from_json(ms[i], "/models/" + std::to_string(i)));
  }

  if (j.contains("lattice")) {
    const json& l = j["lattice"];
    sc::only_keys(l, "/lattice", {"d", "N"});
    c.d = static_cast<int>(sc::integer(sc::required(l, "/lattice", "d"), "/lattice/d"));
    if (c.d < 1 || c.d > 3) throw SchemaError("/lattice/d", "expected 1, 2 or 3");
    const json& n = sc::required(l, "/lattice", "N");
    c.N.clear();
    if (n.is_array()) {
      for (std::size_t i = 0; i < n.size(); ++i)
        c.N.push_back(static_cast<int>(sc::integer(n[i], "/lattice/N/" + std::to_string(i))));
    } else {
      c.N.push_back(static_cast<int>(sc::integer(n, "/lattice/N")));
    }
    if (c.N.empty()) throw SchemaError("/lattice/N", "expected at least one size");
    for (int v : c.N)
      if (v < 2) throw SchemaError("/lattice/N", "sizes must be >= 2");
  }
  if (j.contains("K")) {
    c.K = number_list(j["K"], "/K");
    for (double k : c.K)
      if (!(k >= 0.0)) throw SchemaError("/K", "expected K >= 0");
  }
  if (j.contains("initial")) c.initial = initial_from_json(j["initial"], "/initial");
  c.T = sc::number_or(j, "", "T", c.T);
  if (!(c.T >= 0.0)) throw SchemaError("/T", "expected T >= 0");
  c.snapshot_every = sc::number_or(j, "", "snapshot_every", c.snapshot_every);
  if (!(c.snapshot_every >= 0.0)) throw SchemaError("/snapshot_every", "expected >= 0");
  c.replicas = static_cast<int>(sc::integer_or(j, "", "replicas", c.replicas));
  if (c.replicas < 1) throw SchemaError("/replicas", "expected >= 1");
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw SchemaError("/seed", "expected a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("output")) c.output = sc::string(j["output"], "/output");
  if (j.contains("params")) c.params = params_from_json(j["params"], "/params");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json models = json::array();
  for (const auto& m : c.models) models.push_back(to_json(m));
  json j{{"experiment", c.experiment},
         {"lattice", {{"d", c.d}, {"N", c.N}}},
         {"K", c.K},
         {"initial", to_json(c.initial)},
         {"T", c.T},
         {"snapshot_every", c.snapshot_every},
         {"replicas", c.replicas},
         {"seed", c.seed},
         {"output", c.output},
         {"params", to_json(c.params)}};
  if (c.models.size() == 1)
    j["model"] = models[0];
  else
    j["models"] = models;
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
}

std::string config_hash(const ExperimentConfig& config) {
  json j = to_json(config);
  j.erase("output");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace meancurve
