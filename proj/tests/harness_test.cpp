#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "meancurve/core/errors.hpp"
#include "meancurve/harness/config.hpp"
#include "meancurve/harness/experiments.hpp"
#include "meancurve/harness/metrics.hpp"
#include "meancurve/harness/parallel.hpp"
#include "meancurve/particle/simulator.hpp"

using namespace meancurve;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("meancurve_harness_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json base_json() {
  return json::parse(R"({
    "experiment": "hydro",
    "model": {"label": "ind", "g": {"kind": "indicator"},
              "glauber": {"C": 2.0, "a_minus": 0.2, "a_plus": 0.8, "a_star": "auto"}},
    "lattice": {"d": 2, "N": [8, 16]},
    "K": [1, 2.5],
    "initial": {"kind": "disk", "center": [0.4, 0.6], "radius": 0.2, "width": 0.05, "inside": 3, "outside": 0.5},
    "T": 0.01, "snapshot_every": 0.005, "replicas": 4, "seed": 99, "output": "somewhere",
    "params": {"delta": 0.1, "M0": [1, 2], "safety": 0.5}
  })");
}

ModelConfig cubic_model(double scale = 1.0) {
  ModelConfig m;
  m.kind = "linear_cubic";
  m.a_minus = 0.0;
  m.a_star = 0.5;
  m.a_plus = 1.0;
  m.scale = scale;
  m.label = "cubic";
  return m;
}

struct ThreadsEnv {
  explicit ThreadsEnv(const char* v) { setenv("MEANCURVE_THREADS", v, 1); }
  ~ThreadsEnv() { unsetenv("MEANCURVE_THREADS"); }
};

}  // namespace

TEST_CASE("config round trip") {
  const ExperimentConfig c = config_from_json(base_json());
  CHECK(c.N == std::vector<int>{8, 16});
  CHECK(c.K == std::vector<double>{1.0, 2.5});
  CHECK(c.model().particle.a_star_auto);
  CHECK(c.initial.center[1] == 0.6);
  CHECK(c.params.M0 == std::vector<double>{1.0, 2.0});

  const fs::path dir = scratch("roundtrip");
  save_config(c, dir / "c.json");
  CHECK(load_config(dir / "c.json") == c);

  ExperimentConfig multi = c;
  multi.experiment = "lambda0";
  multi.models.push_back(cubic_model(3.0));
  multi.initial.kind = "table";
  multi.initial.table = {0.1, 0.2, 0.7};
  save_config(multi, dir / "m.json");
  CHECK(load_config(dir / "m.json") == multi);
  CHECK(config_from_json(to_json(multi)) == multi);
}

TEST_CASE("unknown keys are rejected with their path") {
  auto expect_path = [](json j, const std::string& path) {
    try {
      config_from_json(j);
      FAIL("no SchemaError for " << path);
    } catch (const SchemaError& e) {
      CHECK(e.path() == path);
    }
  };
  json j = base_json();
  j["colour"] = "blue";
  expect_path(j, "/colour");
  j = base_json();
  j["initial"]["radus"] = 0.1;
  expect_path(j, "/initial/radus");
  j = base_json();
  j["model"]["glauber"]["a_sstar"] = 0.5;
  expect_path(j, "/model/glauber/a_sstar");
  j = base_json();
  j["params"]["tolerance"] = 1;
  expect_path(j, "/params/tolerance");
  j = base_json();
  j["lattice"]["N"] = "big";
  expect_path(j, "/lattice/N");
  j = base_json();
  j.erase("experiment");
  expect_path(j, "/experiment");
  j = base_json();
  j["models"] = json::array();
  expect_path(j, "/model");
}

TEST_CASE("config hash ignores the output directory only") {
  ExperimentConfig a = config_from_json(base_json());
  ExperimentConfig b = a;
  b.output = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed += 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("metrics file: header, hash and row count") {
  MetricsSink sink("unit", "0123456789abcdef", 7);
  sink.add(0.0, "a", 1.5, 0.25);
  sink.add(0.5, "b[N=8;K=2]", -2.0);
  sink.add(1.0, "c", 1e-300);
  const fs::path file = scratch("metrics") / "m.csv";
  write_metrics(sink.rows(), sink.config_hash(), file);

  std::ifstream in(file);
  std::string first, header;
  std::getline(in, first);
  std::getline(in, header);
  CHECK(first.rfind("# ", 0) == 0);
  CHECK(first.find("config_hash=0123456789abcdef") != std::string::npos);
  CHECK(header == "experiment,config_hash,t,observable,value,stderr,seed");

  const MetricsFile back = read_metrics(file);
  REQUIRE(back.rows.size() == sink.rows().size());
  CHECK(back.config_hash == "0123456789abcdef");
  for (const auto& r : back.rows) CHECK(r.config_hash == back.config_hash);
  CHECK(back.rows[0] == sink.rows()[0]);
  CHECK(std::isnan(back.rows[1].stderr_));
  CHECK(back.rows[2].value == 1e-300);

  std::vector<MetricsRow> orphan = sink.rows();
  orphan[1].config_hash = "ffffffffffffffff";
  CHECK_THROWS_AS(write_metrics(orphan, sink.config_hash(), file), Error);
}

TEST_CASE("worker pool") {
  {
    ThreadsEnv env("3");
    CHECK(worker_count() == 3);
    std::vector<int> hit(50, 0);
    parallel_for(hit.size(), [&](std::size_t i) { hit[i] += static_cast<int>(i); });
    for (std::size_t i = 0; i < hit.size(); ++i) CHECK(hit[i] == static_cast<int>(i));
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                      if (i == 4) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
  ThreadsEnv bad("zero");
  CHECK(worker_count() >= 1);
}

TEST_CASE("snapshot schedule matches the particle simulator") {
  CHECK(snapshot_times(0.01, 0.005) == std::vector<double>{0.0, 0.005, 0.01});
  CHECK(snapshot_times(0.012, 0.005) == std::vector<double>{0.0, 0.005, 0.01, 0.012});
  CHECK(snapshot_times(0.3, 0.0) == std::vector<double>{0.0, 0.3});

  const ExperimentConfig c = config_from_json(base_json());
  const LatticeTorus lat(2, 8);
  Configuration eta(lat, std::vector<std::int32_t>(lat.size(), 1));
  const auto traj = Simulator(c.model().rate_model(), eta, 1.0, 3).run(0.3, 0.07);
  const auto times = snapshot_times(0.3, 0.07);
  REQUIRE(traj.snapshots.size() == times.size());
  for (std::size_t j = 0; j < times.size(); ++j) CHECK(traj.snapshots[j].time == times[j]);
}

TEST_CASE("evolve_to_times agrees with solve on a common grid") {
  const auto hydro = cubic_model(5.0).hydrodynamics();
  const LatticeTorus lat(2, 16);
  InitialProfile init;
  init.kind = "cosine";
  init.low = 0.1;
  init.high = 0.9;
  const DensityField u0 = init.sample(lat);
  const auto table = HydroTable::on_invariant_interval(hydro, 0.0, 1.0);
  PdeParams params = make_pde_params(lat, 4.0, *table);
  params.dt = 0.01 / 400;
  const auto fields = evolve_to_times(u0, params, *table, {0.0, 0.005, 0.01});
  const auto traj = solve(u0, params, *table, 0.01, 0.005);
  REQUIRE(fields.size() == 3);
  REQUIRE(traj.snapshots.size() == 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t x = 0; x < lat.size(); ++x) CHECK(fields[j].u[x] == doctest::Approx(traj.snapshots[j].u[x]).epsilon(1e-12));
}

TEST_CASE("disk transversality proxy") {
  const LatticeTorus lat(2, 64);
  InitialProfile disk;
  disk.kind = "disk";
  disk.radius = 0.25;
  disk.width = 0.03;
  disk.inside = 1.0;
  disk.outside = 0.0;
  CHECK_NOTHROW(disk.check_transversality(lat, 0.5));
  CHECK_NOTHROW(disk.check_transversality(lat, 0.9));
  CHECK_THROWS_AS(disk.check_transversality(lat, 1.5), SchemaError);
  // alpha* close to the inner level: the near-alpha* band sits about two widths inside the circle
  CHECK_THROWS_AS(disk.check_transversality(lat, 0.97), SchemaError);
}

TEST_CASE("hydro: reproducible metrics across worker counts") {
  json j = base_json();
  j["lattice"]["N"] = {8, 12};
  j["K"] = 1.0;
  j["replicas"] = 5;
  const ExperimentConfig c = config_from_json(j);
  const fs::path dir = scratch("repro");
  ExperimentResult a, b;
  {
    ThreadsEnv env("1");
    a = run_experiment(c, dir / "a");
  }
  {
    ThreadsEnv env("4");
    b = run_experiment(c, dir / "b");
  }
  CHECK(a.rows == b.rows);
  auto body = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line, out;
    std::getline(in, line);
    while (std::getline(in, line)) out += line + "\n";
    return out;
  };
  CHECK(body(dir / "a" / "metrics.csv") == body(dir / "b" / "metrics.csv"));
  CHECK(read_metrics(dir / "a" / "metrics.csv").rows.size() == a.rows.size());
  CHECK(load_config(dir / "a" / "config.json") == c);
}

TEST_CASE("hydro: K = 0 constant density stays in the CLT band") {
  json j = base_json();
  j["model"]["g"] = {{"kind", "linear"}};
  j["lattice"]["N"] = 16;
  j["K"] = 0.0;
  j["initial"] = {{"kind", "constant"}, {"value", 1.5}};
  j["T"] = 0.05;
  j["snapshot_every"] = 0.01;
  j["replicas"] = 12;
  const ExperimentResult r = exp_hydro(config_from_json(j));
  CHECK(r.passed);
  // every mismatch at every time against the t = 0 CLT sigma
  for (const char* f : {"one", "cos_v1", "sin_v1", "cos_v2"}) {
    double sigma = NAN;
    for (const auto& row : r.rows)
      if (row.observable == std::string("clt_sigma_") + f + "[N=16;K=0]") sigma = row.value;
    REQUIRE(sigma > 0.0);
    // the product measure at rho is invariant: sigma^2 = rho / N^2 for the constant test function
    if (std::string(f) == "one") CHECK(sigma == doctest::Approx(std::sqrt(1.5) / 16.0).epsilon(1e-9));
    int seen = 0;
    for (const auto& row : r.rows)
      if (row.observable == std::string("mismatch_") + f + "[N=16;K=0]") {
        CHECK(row.value <= 3.0 * sigma);
        ++seen;
      }
    CHECK(seen == 6);
  }
}

TEST_CASE("generation: u0 = alpha+ gives zero fractions for every K") {
  ExperimentConfig c;
  c.experiment = "generation";
  c.models = {cubic_model(4.0)};
  c.N = {16};
  c.K = {16.0, 64.0, 256.0};
  c.initial.kind = "constant";
  c.initial.value = 1.0;
  const ExperimentResult r = exp_generation(c);
  int checked = 0;
  for (const auto& row : r.rows)
    if (row.observable.rfind("frac_", 0) == 0) {
      CHECK(row.value == 0.0);
      ++checked;
    }
  CHECK(checked == 3 * 3 * static_cast<int>(c.params.M0.size()));
  // coverage: all sites lie above alpha* + M0/sqrt K only for small M0
  CHECK(r.rows.size() > 0);
}

TEST_CASE("lambda0 experiment on the linear cubic") {
  ExperimentConfig c;
  c.experiment = "lambda0";
  c.models = {cubic_model(1.0), cubic_model(7.0)};
  c.models[1].label = "steep";
  const ExperimentResult r = exp_lambda0(c);
  CHECK(r.passed);
  CHECK(r.summary["cubic"]["lambda0_intrinsic"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.summary["steep"]["lambda0_profile"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("propagation: small disk run, negative control and early extinction") {
  ExperimentConfig c;
  c.experiment = "propagation";
  c.models = {cubic_model(16.0)};
  c.N = {128};
  c.K = {100.0};
  c.initial.kind = "disk";
  c.initial.radius = 0.3;
  c.initial.width = 0.02;
  c.initial.inside = 1.0;
  c.initial.outside = 0.0;
  c.T = 0.05;
  c.snapshot_every = 0.0025;
  c.params.safety = 1.0;
  c.params.stop_radius = 0.15;
  c.params.radius_tolerance = 0.05;
  const ExperimentResult r = exp_propagation(c);
  CHECK(r.passed);
  CHECK(r.summary["lambda0"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.summary["max_rel_error N=128 K=100"].get<double>() < 0.05);
  CHECK(r.summary["final_radius N=128 K=100"].get<double>() < 0.15);
  double control = 0.0;
  for (const auto& row : r.rows)
    if (row.observable == "control_max_rel_error[N=128;K=100]") control = row.value;
  CHECK(control > 0.1);
  for (const auto& row : r.rows) CHECK(row.config_hash == r.config_hash);

  c.initial.radius = 0.06;
  c.snapshot_every = 0.001;
  CHECK_THROWS_AS(exp_propagation(c), ExtinctEarly);
}
