#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "meancurve/harness/config.hpp"
#include "meancurve/harness/metrics.hpp"
#include "meancurve/pde/hydro_table.hpp"
#include "meancurve/pde/solver.hpp"

namespace meancurve {

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::string config_hash;
  /// Outcome of the experiment's own thresholds.
  bool passed = true;
  /// Headline numbers, keyed by name.
  nlohmann::json summary = nlohmann::json::object();
  /// One line per failed threshold.
  std::vector<std::string> failures;
};

/// Particle system vs discrete PDE, replicas fanned out over the worker pool.
ExperimentResult exp_hydro(const ExperimentConfig& config);
/// Generation of interface at t = log K / (2 gamma K): fraction metrics over the M0 sweep and the envelope sandwich.
ExperimentResult exp_generation(const ExperimentConfig& config);
/// Shrinking disk vs the radius law sqrt(c - 2 lambda0 t). Throws ExtinctEarly.
ExperimentResult exp_propagation(const ExperimentConfig& config);
/// Both lambda0 formulas for every model in the config.
ExperimentResult exp_lambda0(const ExperimentConfig& config);

/// Single particle trajectory; writes snapshot CSVs under `out`.
ExperimentResult run_sim(const ExperimentConfig& config, const std::filesystem::path& out);
/// Single PDE trajectory; writes field CSVs under `out`.
ExperimentResult run_pde(const ExperimentConfig& config, const std::filesystem::path& out);

/// Dispatches on config.experiment, then writes metrics.csv and config.json into `out`.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out);

/// 0 = t_0 < ... < t_end: multiples of `every` (0: none) plus t_end, the same schedule the particle simulator records.
std::vector<double> snapshot_times(double t_end, double every);

/// Fields at each of `times` (ascending, starting at 0), stepping every interval uniformly with dt <= params.dt.
std::vector<DensityField> evolve_to_times(const DensityField& u0, const PdeParams& params, const HydroTable& table,
                                          const std::vector<double>& times);

/// Seed of replica `r` at parameter point `point`.
std::uint64_t replica_seed(std::uint64_t base, std::uint64_t point, std::uint64_t r);

}  // namespace meancurve
