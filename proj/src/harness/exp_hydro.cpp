#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "meancurve/harness/experiments.hpp"
#include "meancurve/harness/parallel.hpp"
#include "meancurve/particle/configuration.hpp"
#include "meancurve/particle/simulator.hpp"
#include "meancurve/rates/marginal.hpp"

namespace meancurve {

namespace {

struct NamedFunction {
  std::string name;
  TestFunction fn;
};

std::vector<NamedFunction> battery(int d) {
  constexpr double tau = 2.0 * std::numbers::pi;
  std::vector<NamedFunction> b{{"one", [](const Point&) { return 1.0; }},
                               {"cos_v1", [](const Point& v) { return std::cos(tau * v[0]); }},
                               {"sin_v1", [](const Point& v) { return std::sin(tau * v[0]); }}};
  if (d >= 2) b.push_back({"cos_v2", [](const Point& v) { return std::cos(tau * v[1]); }});
  return b;
}

double field_pairing(const DensityField& u, const TestFunction& fn) {
  double s = 0.0;
  for (std::size_t x = 0; x < u.u.size(); ++x) s += u.u[x] * fn(u.lattice.position(x));
  return s / static_cast<double>(u.u.size());
}

struct ReplicaOutput {
  std::vector<std::vector<double>> X;  // [snapshot][function]
  std::vector<double> block_l2;        // [snapshot]
  std::uint64_t events = 0;
};

}  // namespace

ExperimentResult exp_hydro(const ExperimentConfig& config) {
  ExperimentResult res;
  res.config_hash = config_hash(config);
  MetricsSink sink("hydro", res.config_hash, config.seed);
  const RateModel model = config.model().rate_model();
  const auto hydro = std::make_shared<ParticleHydrodynamics>(model);
  const auto fns = battery(config.d);
  const auto times = snapshot_times(config.T, config.snapshot_every);
  const int R = config.replicas;

  std::uint64_t point = 0;
  for (double K : config.K) {
    // mean |X| at t = T per function, indexed by N
    std::vector<std::vector<double>> final_mismatch(fns.size());
    for (int N : config.N) {
      ++point;
      const LatticeTorus lat(config.d, N);
      const DensityField u0 = config.initial.sample(lat);
      const auto table = detail::table_for(hydro, u0.u);
      const PdeParams params = make_pde_params(lat, K, *table, config.params.safety);
      const auto pde = evolve_to_times(u0, params, *table, times);
      const int ell = config.params.block_ell > 0 ? config.params.block_ell
                                                  : static_cast<int>(std::lround(std::pow(double(N), 0.25)));

      std::vector<std::vector<double>> pde_pair(times.size(), std::vector<double>(fns.size()));
      for (std::size_t j = 0; j < times.size(); ++j)
        for (std::size_t k = 0; k < fns.size(); ++k) pde_pair[j][k] = field_pairing(pde[j], fns[k].fn);

      // CLT scale of the pairing under the product measure at t = 0
      std::vector<double> sigma(fns.size(), 0.0);
      for (std::size_t x = 0; x < lat.size(); ++x) {
        const double var = Marginal::from_density(model.jump_rate(), u0.u[x]).variance();
        const Point v = lat.position(x);
        for (std::size_t k = 0; k < fns.size(); ++k) sigma[k] += var * std::pow(fns[k].fn(v), 2);
      }
      for (auto& s : sigma) s = std::sqrt(s) / static_cast<double>(lat.size());

      std::vector<ReplicaOutput> out(R);
      parallel_for(R, [&](std::size_t r) {
        const std::uint64_t seed = replica_seed(config.seed, point, r);
        Rng rng(seed);
        Configuration eta0 = init_product(lat, u0.u, model.jump_rate(), rng);
        Simulator sim(model, std::move(eta0), K, mix_seed(seed));
        const Trajectory traj = sim.run(config.T, config.snapshot_every, config.params.max_events);
        ReplicaOutput& o = out[r];
        o.events = traj.events.total();
        for (std::size_t j = 0; j < times.size(); ++j) {
          const Configuration& c = traj.snapshots[j];
          std::vector<double> X(fns.size());
          for (std::size_t k = 0; k < fns.size(); ++k) X[k] = empirical_pairing(c, fns[k].fn) - pde_pair[j][k];
          o.X.push_back(std::move(X));
          const auto blocks = block_average_field(c, ell);
          double l2 = 0.0;
          for (std::size_t x = 0; x < lat.size(); ++x) l2 += std::pow(blocks[x] - pde[j].u[x], 2);
          o.block_l2.push_back(l2 / static_cast<double>(lat.size()));
        }
      });

      auto mean_se = [R](auto&& value) {
        double s = 0.0, s2 = 0.0;
        for (int r = 0; r < R; ++r) {
          const double v = value(r);
          s += v;
          s2 += v * v;
        }
        const double m = s / R;
        const double var = R > 1 ? std::max(0.0, (s2 - R * m * m) / (R - 1)) : 0.0;
        return std::pair{m, std::sqrt(var / R)};
      };

      for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times[j];
        for (std::size_t k = 0; k < fns.size(); ++k) {
          const auto [m_abs, se_abs] = mean_se([&](int r) { return std::abs(out[r].X[j][k]); });
          const auto [m_sig, se_sig] = mean_se([&](int r) { return out[r].X[j][k]; });
          const std::string f = fns[k].name;
          sink.add(t, detail::tag("mismatch_" + f, {{"N", N}, {"K", K}}), m_abs, se_abs);
          sink.add(t, detail::tag("signed_mismatch_" + f, {{"N", N}, {"K", K}}), m_sig, se_sig);
          if (j == 0) {
            sink.add(t, detail::tag("clt_sigma_" + f, {{"N", N}, {"K", K}}), sigma[k]);
            if (!(m_abs <= 3.0 * sigma[k]))
              res.failures.push_back("t=0 mismatch of " + f + " outside the 3 sigma band at N=" + std::to_string(N));
          }
          if (j + 1 == times.size()) final_mismatch[k].push_back(m_abs);
        }
        const auto [m_l2, se_l2] = mean_se([&](int r) { return out[r].block_l2[j]; });
        sink.add(t, detail::tag("block_l2", {{"N", N}, {"K", K}, {"ell", ell}}), m_l2, se_l2);
      }
      const auto [m_ev, se_ev] = mean_se([&](int r) { return static_cast<double>(out[r].events); });
      sink.add(config.T, detail::tag("events", {{"N", N}, {"K", K}}), m_ev, se_ev);
      sink.add(0.0, detail::tag("pde_dt", {{"N", N}, {"K", K}}), params.dt);
    }

    bool decreasing = true;
    for (std::size_t k = 0; k < fns.size(); ++k) {
      bool dec = true;
      for (std::size_t i = 1; i < final_mismatch[k].size(); ++i) dec = dec && final_mismatch[k][i] < final_mismatch[k][i - 1];
      res.summary["decreasing_" + fns[k].name + "_K" + detail::num(K)] = dec;
      res.summary["final_mismatch_" + fns[k].name + "_K" + detail::num(K)] = final_mismatch[k];
      if (!dec) res.failures.push_back("mismatch of " + fns[k].name + " at t=T not strictly decreasing in N");
      decreasing = decreasing && dec;
    }
    sink.add(config.T, detail::tag("decreasing_in_N", {{"K", K}}), decreasing ? 1.0 : 0.0);
  }
  res.summary["t0_within_band"] = std::none_of(res.failures.begin(), res.failures.end(),
                                               [](const std::string& s) { return s.rfind("t=0", 0) == 0; });
  res.passed = res.failures.empty();
  res.rows = sink.rows();
  return res;
}

}  // namespace meancurve
