#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "meancurve/core/errors.hpp"
#include "meancurve/harness/config.hpp"
#include "meancurve/harness/experiments.hpp"

namespace {

const std::map<std::string, std::string> kCommands{{"sim", "sim"},       {"pde", "pde"},
                                                   {"lambda0", "lambda0"}, {"hydro", "hydro"},
                                                   {"generate", "generation"}, {"propagate", "propagation"}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle system, discrete PDE and sharp-interface experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> t_end;
  for (const auto& [name, experiment] : kCommands) {
    auto* sub = app.add_subcommand(name, "run the " + experiment + " experiment");
    sub->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed base (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--t-end", t_end, "horizon T (overrides the config)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    meancurve::ExperimentConfig config = meancurve::load_config(config_path);
    config.experiment = kCommands.at(command);
    if (seed) config.seed = *seed;
    if (t_end) config.T = *t_end;
    if (!out_dir.empty()) config.output = out_dir;

    const auto result = meancurve::run_experiment(config, config.output);
    std::cout << config.experiment << " config_hash=" << result.config_hash << " rows=" << result.rows.size()
              << " out=" << config.output << '\n'
              << result.summary.dump(2) << '\n';
    for (const auto& f : result.failures) std::cout << "FAIL: " << f << '\n';
    return result.passed ? 0 : 2;
  } catch (const meancurve::SchemaError& e) {
    std::cerr << "config error at " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
