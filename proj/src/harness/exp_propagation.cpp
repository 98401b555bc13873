#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "meancurve/core/errors.hpp"
#include "meancurve/harness/experiments.hpp"
#include "meancurve/interface/geometry.hpp"
#include "meancurve/interface/lambda0.hpp"

namespace meancurve {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return NAN;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  return 0.5 * (*mid + *std::max_element(v.begin(), mid));
}

struct RadiusFit {
  double c = 0.0;  // R^2 = c - 2 lambda t
  std::vector<double> error;
  double max_error = 0.0;
};

/// c from least squares with the slope pinned at -2 lambda, over snapshots 1..3;
/// errors over snapshots 1.. with R >= stop.
RadiusFit fit_radius(const std::vector<double>& t, const std::vector<double>& R, double lambda, double stop) {
  RadiusFit fit;
  for (std::size_t j = 1; j <= 3; ++j) fit.c += (R[j] * R[j] + 2.0 * lambda * t[j]) / 3.0;
  for (std::size_t j = 1; j < R.size() && R[j] >= stop; ++j) {
    const double radicand = fit.c - 2.0 * lambda * t[j];
    const double e = radicand > 0.0 ? std::abs(R[j] - std::sqrt(radicand)) / std::sqrt(radicand) : INFINITY;
    fit.error.push_back(e);
    fit.max_error = std::max(fit.max_error, e);
  }
  return fit;
}

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json("inf"); }

}  // namespace

ExperimentResult exp_propagation(const ExperimentConfig& config) {
  if (config.d != 2) throw SchemaError("/lattice/d", "propagation needs d = 2");
  if (config.initial.kind != "disk") throw SchemaError("/initial/kind", "propagation needs a disk");
  if (!(config.snapshot_every > 0.0)) throw SchemaError("/snapshot_every", "propagation needs snapshots");
  ExperimentResult res;
  res.config_hash = config_hash(config);
  MetricsSink sink("propagation", res.config_hash, config.seed);
  const auto& p = config.params;
  const auto hydro = config.model().hydrodynamics();
  const ReactionZeros z = hydro->zeros();
  const FlowConstant flow = flow_constant(hydro);
  const double lambda0 = flow.lambda0_intrinsic;
  sink.add(0.0, "lambda0", lambda0);
  res.summary["lambda0"] = lambda0;

  for (int N : config.N) {
    const LatticeTorus lat(2, N);
    const DensityField u0 = config.initial.sample(lat);
    config.initial.check_transversality(lat, z.alpha_star);
    const auto table = detail::table_for(hydro, u0.u);
    for (double K : config.K) {
      const auto key = [&](const char* base) { return detail::tag(base, {{"N", N}, {"K", K}}); };
      const std::string point = "N=" + std::to_string(N) + " K=" + detail::num(K);
      DensityField field = u0;
      const PdeParams params = make_pde_params(lat, K, *table, p.safety);
      PdeStepper stepper(lat, params, *table);
      const double eps = 1.0 / std::sqrt(K);
      const auto times = snapshot_times(config.T, config.snapshot_every);

      std::vector<double> t_obs, R_obs;
      double t = 0.0;
      bool vanished = false;
      double plateau_gap_out = 0.0, plateau_gap_in = 0.0;
      for (double target : times) {
        if (target > t) {
          const auto steps = static_cast<std::uint64_t>(std::ceil((target - t) / params.dt * (1.0 - 1e-14)));
          const double dt = (target - t) / static_cast<double>(steps);
          for (std::uint64_t k = 0; k < steps; ++k) stepper.step(field, dt);
          t = target;
          field.t = t;
        }
        InterfaceEstimate est;
        try {
          est = extract_interface(field, z.alpha_star);
        } catch (const NoCrossing&) {
          vanished = true;
          break;
        }
        t_obs.push_back(t);
        R_obs.push_back(est.radius);
        sink.add(t, key("radius"), est.radius);

        if (t_obs.size() > 1) {
          std::vector<double> in, out;
          for (std::size_t x = 0; x < lat.size(); ++x) {
            const double sd = signed_distance_circle(lat.position(x), est.centroid, est.radius);
            if (sd >= p.far_field_factor * eps) out.push_back(field.u[x]);
            if (sd <= -p.far_field_factor * eps) in.push_back(field.u[x]);
          }
          const double m_out = median(std::move(out)), m_in = median(std::move(in));
          sink.add(t, key("far_field_outside_median"), m_out);
          sink.add(t, key("far_field_inside_median"), m_in);
          if (!std::isnan(m_out)) plateau_gap_out = std::max(plateau_gap_out, std::abs(m_out - z.alpha_minus));
          if (!std::isnan(m_in)) plateau_gap_in = std::max(plateau_gap_in, std::abs(m_in - z.alpha_plus));
        }
        if (est.radius < p.stop_radius) break;
      }
      if (R_obs.size() < 4) throw ExtinctEarly("fewer than four snapshots with an interface at " + point);

      const RadiusFit fit = fit_radius(t_obs, R_obs, lambda0, p.stop_radius);
      if (vanished && fit.c - 2.0 * lambda0 * t_obs.back() > p.stop_radius * p.stop_radius)
        throw ExtinctEarly("interface vanished at t=" + detail::num(t) + " before the reference radius reached " +
                           detail::num(p.stop_radius) + " at " + point);
      const RadiusFit control = fit_radius(t_obs, R_obs, p.control_factor * lambda0, p.stop_radius);
      const double R0_eff = R_obs.front();
      const double t_shift = (fit.c - R0_eff * R0_eff) / (2.0 * lambda0);
      const double t_shift_bound = 2.0 * std::log(K) / (table->gamma() * K);
      const bool reached = R_obs.back() < p.stop_radius;

      for (std::size_t j = 0; j < fit.error.size(); ++j) {
        sink.add(t_obs[j + 1], key("radius_reference"), std::sqrt(fit.c - 2.0 * lambda0 * t_obs[j + 1]));
        sink.add(t_obs[j + 1], key("radius_rel_error"), fit.error[j]);
      }
      for (std::size_t j = 0; j < control.error.size(); ++j)
        sink.add(t_obs[j + 1], key("control_rel_error"), control.error[j]);
      sink.add(0.0, key("R0_eff"), R0_eff);
      sink.add(0.0, key("t_shift"), t_shift);
      sink.add(0.0, key("t_shift_bound"), t_shift_bound);
      sink.add(t_obs.back(), key("radius_max_rel_error"), fit.max_error);
      sink.add(t_obs.back(), key("control_max_rel_error"), control.max_error);
      sink.add(t_obs.back(), key("reached_stop_radius"), reached ? 1.0 : 0.0);
      sink.add(0.0, key("pde_dt"), params.dt);

      res.summary["max_rel_error " + point] = number(fit.max_error);
      res.summary["control_max_rel_error " + point] = number(control.max_error);
      res.summary["t_shift " + point] = t_shift;
      res.summary["t_shift_bound " + point] = t_shift_bound;
      res.summary["R0_eff " + point] = R0_eff;
      res.summary["final_radius " + point] = R_obs.back();
      res.summary["final_time " + point] = t_obs.back();
      if (!reached) res.failures.push_back("radius stayed above " + detail::num(p.stop_radius) + " up to T at " + point);
      if (fit.max_error > p.radius_tolerance)
        res.failures.push_back("radius error " + detail::num(fit.max_error) + " exceeds tolerance at " + point);
      if (!(control.max_error > p.control_threshold))
        res.failures.push_back("negative control error " + detail::num(control.max_error) + " not above threshold at " + point);
      sink.add(t_obs.back(), key("far_field_outside_max_gap"), plateau_gap_out);
      sink.add(t_obs.back(), key("far_field_inside_max_gap"), plateau_gap_in);
      res.summary["far_field_outside_max_gap " + point] = plateau_gap_out;
      res.summary["far_field_inside_max_gap " + point] = plateau_gap_in;
      if (plateau_gap_out > p.far_field_delta) res.failures.push_back("outer plateau off alpha- at " + point);
      if (plateau_gap_in > p.far_field_delta) res.failures.push_back("inner plateau off alpha+ at " + point);
      if (t_shift > t_shift_bound) res.failures.push_back("t_shift above the generation bound at " + point);
    }
  }
  res.passed = res.failures.empty();
  res.rows = sink.rows();
  return res;
}

}  // namespace meancurve
