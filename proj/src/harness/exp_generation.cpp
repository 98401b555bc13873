#include <cmath>

#include "detail.hpp"
#include "meancurve/harness/experiments.hpp"
#include "meancurve/pde/generation.hpp"

namespace meancurve {

namespace {

struct Fractions {
  double range = 0.0;  // u outside [alpha- - delta, alpha+ + delta]
  double upper = 0.0;  // u < alpha+ - delta where u0 >= alpha* + M0 / sqrt K
  double lower = 0.0;  // u > alpha- + delta where u0 <= alpha* - M0 / sqrt K
  double coverage = 0.0;
};

Fractions fractions(const DensityField& u0, const DensityField& u, const ReactionZeros& z, double delta, double M0,
                    double K) {
  const double margin = M0 / std::sqrt(K);
  std::size_t bad_range = 0, up = 0, bad_up = 0, down = 0, bad_down = 0;
  for (std::size_t x = 0; x < u.u.size(); ++x) {
    const double v = u.u[x];
    if (v < z.alpha_minus - delta || v > z.alpha_plus + delta) ++bad_range;
    if (u0.u[x] >= z.alpha_star + margin) {
      ++up;
      if (v < z.alpha_plus - delta) ++bad_up;
    } else if (u0.u[x] <= z.alpha_star - margin) {
      ++down;
      if (v > z.alpha_minus + delta) ++bad_down;
    }
  }
  const double n = static_cast<double>(u.u.size());
  return {bad_range / n, up ? double(bad_up) / up : 0.0, down ? double(bad_down) / down : 0.0, (up + down) / n};
}

/// Largest amount by which u leaves [lower, upper]; <= 0 means sandwiched.
double sandwich_violation(const Envelopes& env, const DensityField& u) {
  double worst = -INFINITY;
  for (std::size_t x = 0; x < u.u.size(); ++x)
    worst = std::max({worst, env.lower.u[x] - u.u[x], u.u[x] - env.upper.u[x]});
  return worst;
}

}  // namespace

ExperimentResult exp_generation(const ExperimentConfig& config) {
  ExperimentResult res;
  res.config_hash = config_hash(config);
  MetricsSink sink("generation", res.config_hash, config.seed);
  const auto& p = config.params;
  const auto hydro = config.model().hydrodynamics();
  const ReactionZeros z = hydro->zeros();
  constexpr double kTie = 1e-12;

  for (int N : config.N) {
    const LatticeTorus lat(config.d, N);
    const DensityField u0 = config.initial.sample(lat);
    config.initial.check_transversality(lat, z.alpha_star);
    const auto table = detail::table_for(hydro, u0.u);
    for (double K : config.K) {
      const double gamma = table->gamma();
      const double tN = generation_time(K, gamma);
      const PdeParams params = make_pde_params(lat, K, *table, p.safety);
      std::vector<double> times;
      for (int j = 0; j <= p.envelope_times; ++j) times.push_back(tN * j / p.envelope_times);
      const auto traj = evolve_to_times(u0, params, *table, times);
      const DensityField& uN = traj.back();
      sink.add(tN, detail::tag("t_generation", {{"N", N}, {"K", K}}), tN);
      sink.add(tN, detail::tag("gamma", {{"N", N}, {"K", K}}), gamma);

      double tuned = NAN;
      for (double M0 : p.M0) {
        const Fractions f = fractions(u0, uN, z, p.delta, M0, K);
        const auto key = [&](const char* base) {
          return detail::tag(base, {{"N", N}, {"K", K}, {"delta", p.delta}, {"M0", M0}});
        };
        sink.add(tN, key("frac_range"), f.range);
        sink.add(tN, key("frac_upper"), f.upper);
        sink.add(tN, key("frac_lower"), f.lower);
        sink.add(tN, key("coverage"), f.coverage);
        if (std::isnan(tuned) && f.range == 0.0 && f.upper == 0.0 && f.lower == 0.0 && f.coverage >= p.min_coverage)
          tuned = M0;
      }
      sink.add(tN, detail::tag("M0_tuned", {{"N", N}, {"K", K}, {"delta", p.delta}}), tuned);
      const std::string point = "N=" + std::to_string(N) + " K=" + detail::num(K);
      res.summary["M0_tuned " + point] = std::isnan(tuned) ? nlohmann::json(nullptr) : nlohmann::json(tuned);
      if (std::isnan(tuned))
        res.failures.push_back("no M0 in the sweep zeroes all fractions with coverage >= " +
                               detail::num(p.min_coverage) + " at " + point);

      // envelope sandwich at every intermediate time, doubling C4 until it holds
      const double C4_default = default_C4(*table);
      double C4 = p.C4 > 0.0 ? p.C4 : C4_default;
      std::vector<double> violation;
      bool holds = false;
      for (int attempt = 0;; ++attempt) {
        violation.clear();
        holds = true;
        for (std::size_t j = 1; j < times.size() && holds; ++j) {
          violation.push_back(sandwich_violation(generation_envelopes(u0, K, C4, times[j], *table), traj[j]));
          holds = violation.back() <= kTie;
        }
        if (holds || attempt == p.C4_doublings) break;
        C4 *= 2.0;
      }
      for (std::size_t j = 0; j < violation.size(); ++j)
        sink.add(times[j + 1], detail::tag("sandwich_violation", {{"N", N}, {"K", K}}), violation[j]);
      sink.add(tN, detail::tag("sandwich_C4", {{"N", N}, {"K", K}}), C4);
      sink.add(tN, detail::tag("sandwich_C4_over_default", {{"N", N}, {"K", K}}), C4 / C4_default);
      sink.add(tN, detail::tag("sandwich_holds", {{"N", N}, {"K", K}}), holds ? 1.0 : 0.0);
      sink.add(tN, detail::tag("envelope_shift_at_tN", {{"N", N}, {"K", K}}), envelope_shift(C4, gamma, K, tN));
      res.summary["sandwich_holds " + point] = holds;
      res.summary["sandwich_C4 " + point] = C4;
      res.summary["sandwich_C4_over_default " + point] = C4 / C4_default;
      if (!holds) res.failures.push_back("envelope sandwich fails up to the largest C4 tried at " + point);
    }
  }
  res.passed = res.failures.empty();
  res.rows = sink.rows();
  return res;
}

}  // namespace meancurve
