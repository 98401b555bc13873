#include <cmath>
#include <cstdio>

#include "detail.hpp"
#include "meancurve/core/errors.hpp"
#include "meancurve/core/random.hpp"
#include "meancurve/harness/experiments.hpp"
#include "meancurve/interface/geometry.hpp"
#include "meancurve/particle/configuration.hpp"
#include "meancurve/particle/simulator.hpp"
#include "meancurve/particle/snapshot_io.hpp"

namespace meancurve {

namespace {

std::filesystem::path numbered(const std::filesystem::path& dir, const char* stem, std::size_t j) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04zu.csv", stem, j);
  return dir / buf;
}

}  // namespace

ExperimentResult run_sim(const ExperimentConfig& config, const std::filesystem::path& out) {
  ExperimentResult res;
  res.config_hash = config_hash(config);
  MetricsSink sink("sim", res.config_hash, config.seed);
  const RateModel model = config.model().rate_model();
  const LatticeTorus lat(config.d, config.N.front());
  const double K = config.K.front();
  const DensityField u0 = config.initial.sample(lat);
  const std::uint64_t seed = replica_seed(config.seed, 0, 0);
  Rng rng(seed);
  Simulator sim(model, init_product(lat, u0.u, model.jump_rate(), rng), K, mix_seed(seed));
  const Trajectory traj = sim.run(config.T, config.snapshot_every, config.params.max_events);

  const auto dir = out / "snapshots";
  std::filesystem::create_directories(dir);
  for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
    const Configuration& c = traj.snapshots[j];
    write_snapshot_csv(c, numbered(dir, "eta", j));
    sink.add(c.time, "total_particles", static_cast<double>(c.total));
    sink.add(c.time, "mass", static_cast<double>(c.total) / static_cast<double>(lat.size()));
  }
  sink.add(config.T, "jumps", static_cast<double>(traj.events.jumps));
  sink.add(config.T, "creations", static_cast<double>(traj.events.creations));
  sink.add(config.T, "annihilations", static_cast<double>(traj.events.annihilations));
  res.summary["events"] = traj.events.total();
  res.summary["snapshots"] = traj.snapshots.size();
  res.rows = sink.rows();
  return res;
}

ExperimentResult run_pde(const ExperimentConfig& config, const std::filesystem::path& out) {
  ExperimentResult res;
  res.config_hash = config_hash(config);
  MetricsSink sink("pde", res.config_hash, config.seed);
  const auto hydro = config.model().hydrodynamics();
  const LatticeTorus lat(config.d, config.N.front());
  const double K = config.K.front();
  const DensityField u0 = config.initial.sample(lat);
  const auto table = detail::table_for(hydro, u0.u);
  const PdeParams params = make_pde_params(lat, K, *table, config.params.safety);
  const auto fields = evolve_to_times(u0, params, *table, snapshot_times(config.T, config.snapshot_every));

  const auto dir = out / "fields";
  std::filesystem::create_directories(dir);
  for (std::size_t j = 0; j < fields.size(); ++j) {
    const DensityField& f = fields[j];
    write_field_csv(f, numbered(dir, "u", j));
    double mass = 0.0, lo = f.u.front(), hi = f.u.front();
    for (double v : f.u) {
      mass += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    sink.add(f.t, "mass", mass / static_cast<double>(lat.size()));
    sink.add(f.t, "min", lo);
    sink.add(f.t, "max", hi);
    if (config.d == 2) {
      try {
        sink.add(f.t, "interface_radius", extract_interface(f, hydro->alpha_star()).radius);
      } catch (const NoCrossing&) {
      }
    }
  }
  sink.add(0.0, "dt", params.dt);
  res.summary["dt"] = params.dt;
  res.summary["snapshots"] = fields.size();
  res.rows = sink.rows();
  return res;
}

}  // namespace meancurve
