#include <cmath>
#include <fstream>

#include "detail.hpp"
#include "meancurve/core/errors.hpp"
#include "meancurve/core/random.hpp"
#include "meancurve/harness/experiments.hpp"

namespace meancurve {

std::vector<double> snapshot_times(double t_end, double every) {
  std::vector<double> times;
  if (every > 0.0) {
    for (std::uint64_t k = 0;; ++k) {
      const double s = static_cast<double>(k) * every;
      if (s > t_end + 1e-12 * std::max(1.0, std::abs(t_end))) break;
      times.push_back(std::min(s, t_end));
    }
  } else {
    times.push_back(0.0);
  }
  if (times.back() < t_end) times.push_back(t_end);
  return times;
}

std::vector<DensityField> evolve_to_times(const DensityField& u0, const PdeParams& params, const HydroTable& table,
                                          const std::vector<double>& times) {
  PdeStepper stepper(u0.lattice, params, table);
  std::vector<DensityField> out;
  DensityField u = u0;
  double t = times.empty() ? 0.0 : times.front();
  u.t = t;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<std::uint64_t>(std::ceil(span / params.dt * (1.0 - 1e-14)));
      const double dt = span / static_cast<double>(steps);
      for (std::uint64_t k = 0; k < steps; ++k) stepper.step(u, dt);
    }
    t = target;
    u.t = target;
    out.push_back(u);
  }
  return out;
}

std::uint64_t replica_seed(std::uint64_t base, std::uint64_t point, std::uint64_t r) {
  return mix_seed(base ^ mix_seed((point << 32) ^ r));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out) {
  ExperimentResult res;
  const std::string& e = config.experiment;
  if (e == "hydro") res = exp_hydro(config);
  else if (e == "generation") res = exp_generation(config);
  else if (e == "propagation") res = exp_propagation(config);
  else if (e == "lambda0") res = exp_lambda0(config);
  else if (e == "sim") res = run_sim(config, out);
  else if (e == "pde") res = run_pde(config, out);
  else throw SchemaError("/experiment", "unknown experiment '" + e + "'");

  std::filesystem::create_directories(out);
  save_config(config, out / "config.json");
  write_metrics(res.rows, res.config_hash, out / "metrics.csv");
  std::ofstream(out / "summary.json") << res.summary.dump(2) << '\n';
  return res;
}

}  // namespace meancurve
