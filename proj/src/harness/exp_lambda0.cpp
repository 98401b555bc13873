#include <cmath>

#include "detail.hpp"
#include "meancurve/harness/experiments.hpp"
#include "meancurve/interface/lambda0.hpp"
#include "meancurve/interface/potential.hpp"

namespace meancurve {

ExperimentResult exp_lambda0(const ExperimentConfig& config) {
  ExperimentResult res;
  res.config_hash = config_hash(config);
  MetricsSink sink("lambda0", res.config_hash, config.seed);
  for (std::size_t i = 0; i < config.models.size(); ++i) {
    const ModelConfig& m = config.models[i];
    const std::string label = m.label.empty() ? "model" + std::to_string(i) : m.label;
    const auto hydro = m.hydrodynamics();
    const FlowConstant fc = flow_constant(hydro);
    const PotentialW W(hydro);
    const auto name = [&](const char* base) { return std::string(base) + "[" + label + "]"; };
    sink.add(0.0, name("alpha_minus"), hydro->alpha_minus());
    sink.add(0.0, name("alpha_star"), hydro->alpha_star());
    sink.add(0.0, name("alpha_plus"), hydro->alpha_plus());
    sink.add(0.0, name("lambda0_intrinsic"), fc.lambda0_intrinsic);
    sink.add(0.0, name("lambda0_profile"), fc.lambda0_profile);
    sink.add(0.0, name("relative_gap"), fc.relative_gap());
    sink.add(0.0, name("balance_residual"), fc.balance_residual);
    sink.add(0.0, name("profile_residual"), fc.profile_residual);
    sink.add(0.0, name("W_alpha_minus"), W.from_right(hydro->alpha_minus()));
    res.summary[label] = {{"lambda0_intrinsic", fc.lambda0_intrinsic},
                          {"lambda0_profile", fc.lambda0_profile},
                          {"relative_gap", fc.relative_gap()}};
    if (!(fc.relative_gap() <= config.params.lambda0_tolerance))
      res.failures.push_back(label + ": relative gap " + detail::num(fc.relative_gap()) + " above tolerance");
  }
  res.passed = res.failures.empty();
  res.rows = sink.rows();
  return res;
}

}  // namespace meancurve
