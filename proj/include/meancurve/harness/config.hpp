#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "meancurve/core/lattice.hpp"
#include "meancurve/pde/field.hpp"
#include "meancurve/rates/rate_model_json.hpp"

namespace meancurve {

/// Either a particle rate model or the synthetic phi(u) = u, cubic f benchmark.
struct ModelConfig {
  std::string kind = "particle";  // particle | linear_cubic
  RateModelSpec particle;
  double a_minus = 0.0, a_star = 0.5, a_plus = 1.0, scale = 1.0;  // linear_cubic
  std::string label;

  /// Hydrodynamic coefficients; particle models are calibrated first when a* is "auto".
  std::shared_ptr<const Hydrodynamics> hydrodynamics() const;
  /// Throws SchemaError for synthetic models, which have no particle system.
  RateModel rate_model() const;

  /// Compares the fields the kind uses.
  bool operator==(const ModelConfig& o) const;
};

struct InitialProfile {
  std::string kind = "constant";  // constant | two_phase | disk | cosine | table
  double value = 1.0;             // constant
  double low = 0.0, high = 1.0;   // two_phase: high on v_1 < split, cosine: mean +- amplitude
  double split = 0.5;
  int mode = 1;                   // cosine wave number along v_1
  Point center{0.5, 0.5, 0.5};    // disk
  double radius = 0.25;
  double width = 0.0;             // tanh smoothing width; 0 is a sharp indicator
  double inside = 1.0, outside = 0.0;
  std::vector<double> table;      // table: values on a uniform grid of [0,1) along v_1, periodic

  double operator()(const Point& v, int d) const;
  DensityField sample(const LatticeTorus& lattice) const;
  /// Sites with |u0 - alpha*| < gap must lie within 1.5 widths of the disk boundary.
  /// Throws SchemaError("/initial", ...) otherwise; no-op for other kinds.
  void check_transversality(const LatticeTorus& lattice, double alpha_star) const;

  /// Compares the fields the kind uses.
  bool operator==(const InitialProfile& o) const;
};

/// Knobs read by individual experiments; all have defaults.
struct ExperimentParams {
  double safety = 0.25;        // PDE step as a fraction of the stability bound
  std::int64_t max_events = 0;
  int block_ell = 0;           // 0: round(N^{1/4})
  double delta = 0.05;
  std::vector<double> M0 = {0.25, 0.5, 1, 2, 4, 8, 16};
  double C4 = 0.0;             // 0: default, doubled until the sandwich holds
  int C4_doublings = 12;
  int envelope_times = 10;
  double min_coverage = 0.5;
  double stop_radius = 0.1;
  double radius_tolerance = 0.03;
  double control_factor = 2.0;
  double control_threshold = 0.1;
  double far_field_factor = 5.0;
  double far_field_delta = 0.02;
  double lambda0_tolerance = 1e-4;

  bool operator==(const ExperimentParams&) const = default;
};

struct ExperimentConfig {
  std::string experiment = "hydro";  // sim | pde | hydro | generation | propagation | lambda0
  std::vector<ModelConfig> models{ModelConfig{}};
  int d = 2;
  std::vector<int> N{32};
  std::vector<double> K{1.0};
  InitialProfile initial;
  double T = 0.0;
  double snapshot_every = 0.0;
  int replicas = 1;
  std::uint64_t seed = 1;
  std::string output = "out";
  ExperimentParams params;

  const ModelConfig& model() const { return models.front(); }
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

/// FNV-1a 64 of the canonical (sorted-key, compact) JSON dump without the
/// output directory, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace meancurve
