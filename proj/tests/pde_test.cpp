#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/random.hpp"
#include "meancurve/pde/generation.hpp"
#include "meancurve/pde/solver.hpp"
#include "meancurve/rates/rate_model.hpp"
#include "meancurve/rates/reaction.hpp"

using namespace meancurve;
using std::numbers::pi;

namespace {

std::shared_ptr<const Hydrodynamics> cubic(double scale = 1.0) {
  return std::make_shared<SyntheticHydrodynamics>(SyntheticHydrodynamics::linear_cubic(0.2, 0.5, 0.8, scale));
}

std::shared_ptr<const HydroTable> cubic_table(double scale = 1.0) {
  return HydroTable::on_invariant_interval(cubic(scale), 0.0, 1.0);
}

std::shared_ptr<const Hydrodynamics> indicator_model() {
  GlauberRateSpec s;
  s.C = 2.0;
  RateModel base(JumpRate::indicator(), s);
  return std::make_shared<ParticleHydrodynamics>(base.with_a_star(calibrate_balance(base)));
}

DensityField random_field(const LatticeTorus& lat, Rng& rng, double lo, double hi) {
  DensityField f(lat);
  for (auto& v : f.u) v = lo + (hi - lo) * rng.uniform();
  return f;
}

double sup_diff(const DensityField& a, const DensityField& b) {
  double m = 0;
  for (std::size_t x = 0; x < a.u.size(); ++x) m = std::max(m, std::abs(a.u[x] - b.u[x]));
  return m;
}

}  // namespace

TEST_CASE("hydro table reproduces the source") {
  const auto src = indicator_model();
  const HydroTable table(src, 0.0, 5.0);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double u = 5.0 * rng.uniform();
    CHECK(std::abs(table.phi(u) - src->phi(u)) < 1e-10);
    CHECK(std::abs(table.f(u) - src->f(u)) < 1e-10);
    CHECK(std::abs(table.phi_prime(u) - src->phi_prime(u)) < 1e-6);
  }
  CHECK(table.phi(7.0) == doctest::Approx(src->phi(7.0)).epsilon(1e-14));
  CHECK(table.gamma() > 0.0);
  CHECK(table.phi_lip() == doctest::Approx(1.0).epsilon(1e-12));  // phi' = 1/(1+u)^2 is largest at 0
}

TEST_CASE("discrete Laplacian") {
  const auto h = cubic();
  Rng rng(2);
  SUBCASE("constant field") {
    const LatticeTorus lat(2, 8);
    for (double v : discrete_laplacian_phi(DensityField(lat, 0.7), *h)) CHECK(v == 0.0);
  }
  SUBCASE("zero sum") {
    for (int trial = 0; trial < 100; ++trial) {
      const LatticeTorus lat(1 + trial % 3, 6 + trial % 5);
      const auto f = random_field(lat, rng, 0.0, 2.0);
      double s = 0, norm = 0;
      for (double v : discrete_laplacian_phi(f, *h)) s += v;
      for (double v : f.u) norm = std::max(norm, v);
      CHECK(std::abs(s) <= 1e-10 * norm * lat.side() * lat.side());
    }
  }
  SUBCASE("Fourier eigenvalue in d = 1") {
    const int N = 16;
    const LatticeTorus lat(1, N);
    std::vector<double> p(N);
    for (int x = 0; x < N; ++x) p[x] = std::sin(2 * pi * x / N);
    const auto lap = discrete_laplacian(lat, p);
    const double lambda = 4.0 * N * N * std::pow(std::sin(pi / N), 2);
    for (int x = 0; x < N; ++x) CHECK(std::abs(lap[x] + lambda * p[x]) < 1e-12);
  }
}

TEST_CASE("Euler step") {
  const auto table = cubic_table();
  const LatticeTorus lat(2, 16);
  auto params = make_pde_params(lat, 5.0, *table);

  const auto stay = step_euler(DensityField(lat, 0.8), params, *table);
  for (double v : stay.u) CHECK(std::abs(v - 0.8) < 1e-15);

  Rng rng(3);
  auto params0 = make_pde_params(lat, 0.0, *table);
  auto f = random_field(lat, rng, 0.0, 1.0);
  double m0 = 0, m1 = 0;
  for (double v : f.u) m0 += v;
  for (double v : step_euler(f, params0, *table).u) m1 += v;
  CHECK(std::abs(m1 - m0) < 1e-12 * m0);

  // u + dt (Lap phi(u) + K f(u)), written out
  for (int n : {3, 4, 16}) {
    const LatticeTorus small(2, n);
    auto p = make_pde_params(small, 5.0, *table);
    const auto g = random_field(small, rng, 0.0, 1.0);
    const auto lap = discrete_laplacian_phi(g, *table);
    const auto next = step_euler(g, p, *table);
    for (std::size_t x = 0; x < g.u.size(); ++x)
      CHECK(next.u[x] == doctest::Approx(g.u[x] + p.dt * (lap[x] + 5.0 * table->f(g.u[x]))).epsilon(1e-13));
  }

  auto bad = params;
  bad.dt *= 2.0 / bad.safety;
  CHECK_THROWS_AS(step_euler(f, bad, *table), CflViolation);
}

TEST_CASE("heat decay of the lowest mode") {
  const int N = 32;
  const LatticeTorus lat(1, N);
  const auto table = cubic_table();
  auto params = make_pde_params(lat, 0.0, *table);
  auto u0 = sample_field(lat, [](const Point& v) { return 0.5 + 0.1 * std::cos(2 * pi * v[0]); });
  const double t_end = 0.01;
  const auto traj = solve(u0, params, *table, t_end);
  const double lambda = 4.0 * N * N * std::pow(std::sin(pi / N), 2);
  const double amp = traj.snapshots.back().u[0] - 0.5;
  // the explicit scheme multiplies the mode by exactly (1 - dt lambda) per step
  CHECK(amp == doctest::Approx(0.1 * std::pow(1 - traj.dt * lambda, double(traj.steps))).epsilon(1e-10));
  const double rate = -std::log(amp / 0.1) / t_end;
  CHECK(std::abs(rate - lambda) <= lambda * lambda * traj.dt);
}

TEST_CASE("solve: snapshots, determinism and first-order convergence") {
  const auto table = cubic_table(10.0);
  const LatticeTorus lat(2, 16);
  auto u0 = sample_field(lat, [](const Point& v) { return 0.5 + 0.3 * std::sin(2 * pi * v[0]) * std::cos(2 * pi * v[1]); });
  auto p = make_pde_params(lat, 8.0, *table);
  const auto a = solve(u0, p, *table, 0.02, 0.005);
  const auto b = solve(u0, p, *table, 0.02, 0.005);
  CHECK(a.snapshots.size() == 5);
  CHECK(a.snapshots.back().t == doctest::Approx(0.02).epsilon(1e-14));
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) CHECK(a.snapshots[i] == b.snapshots[i]);
  CHECK(solve(u0, p, *table, 0.0).snapshots.size() == 1);

  auto p2 = p, p4 = p;
  p2.dt /= 2;
  p4.dt /= 4;
  const auto e1 = sup_diff(solve(u0, p, *table, 0.02).snapshots.back(), solve(u0, p2, *table, 0.02).snapshots.back());
  const auto e2 = sup_diff(solve(u0, p2, *table, 0.02).snapshots.back(), solve(u0, p4, *table, 0.02).snapshots.back());
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("step function view") {
  const LatticeTorus lat(2, 8);
  Rng rng(4);
  const auto f = random_field(lat, rng, 0.0, 3.0);
  for (std::size_t x = 0; x < lat.size(); ++x) CHECK(step_function_view(f, lat.position(x)) == f.u[x]);
  const Point p1{0.30, 0.61, 0}, p2{0.31, 0.66, 0};
  CHECK(step_function_view(f, p1) == step_function_view(f, p2));
  CHECK(step_function_view(f, {0.97, 0.99, 0}) == f.u[0]);  // wraps to site 0
  const int M = 4 * lat.side();
  double integral = 0, mean = 0;
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) integral += step_function_view(f, {(i + 0.5) / M, (j + 0.5) / M, 0});
  integral /= double(M) * M;
  for (double v : f.u) mean += v;
  CHECK(integral == doctest::Approx(mean / lat.size()).epsilon(1e-13));
}

TEST_CASE("comparison principle and invariant interval") {
  const auto table = HydroTable::on_invariant_interval(indicator_model(), 0.0, 5.0);
  const LatticeTorus lat(2, 16);
  const auto p = make_pde_params(lat, 4.0, *table);
  Rng rng(5);
  const auto u = random_field(lat, rng, 0.0, 5.0);
  CHECK(comparison_check(u, u, p, *table, 0.01).ordered);
  CHECK(comparison_check(DensityField(lat, 0.5), DensityField(lat, 1.5), p, *table, 0.01).ordered);
  for (int trial = 0; trial < 5; ++trial) {
    auto lo = random_field(lat, rng, 0.0, 5.0);
    auto hi = lo;
    for (auto& v : hi.u) v += rng.uniform() * 0.5;
    const auto rep = comparison_check(lo, hi, p, *table, 0.01);
    CHECK(rep.ordered);
    CHECK(rep.min_value >= -1e-12);
    CHECK(rep.max_value <= std::max(5.5, table->alpha_plus()) + 1e-12);
  }
  // a reversed pair is reported with its first violation
  const auto rep = comparison_check(DensityField(lat, 1.5), DensityField(lat, 0.5), p, *table, 0.01);
  CHECK_FALSE(rep.ordered);
  CHECK(rep.t == 0.0);
}

TEST_CASE("energy identity") {
  const auto table = cubic_table(5.0);
  const LatticeTorus lat(2, 16);
  auto u0 = sample_field(lat, [](const Point& v) { return 0.5 + 0.3 * std::cos(2 * pi * v[0]); });

  auto run = [&](double K, double dt_scale) {
    auto p = make_pde_params(lat, K, *table);
    p.dt *= dt_scale;
    std::vector<DensityField> fields;
    const auto traj = solve(u0, p, *table, 0.01, 0.0, [&](const DensityField& f, std::uint64_t) { fields.push_back(f); });
    return energy_identity_residual(fields, traj.dt, K, *table);
  };
  const auto r1 = run(3.0, 1.0);
  const auto r2 = run(3.0, 0.5);
  const double ratio = r1.max_abs() / r2.max_abs();
  CAPTURE(ratio);
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.5);
  for (double d : run(0.0, 1.0).dissipation) CHECK(d <= 0.0);

  auto p = make_pde_params(lat, 3.0, *table);
  std::vector<DensityField> still(3, DensityField(lat, 0.8));
  CHECK(energy_identity_residual(still, p.dt, 3.0, *table).max_abs() < 1e-15);
}

TEST_CASE("derivative diagnostics") {
  const auto h = cubic();
  const auto z = derivative_diagnostics(DensityField(LatticeTorus(2, 8), 0.3), *h);
  CHECK(z.grad == 0.0);
  CHECK(z.hessian == 0.0);
  CHECK(z.laplacian_phi == 0.0);

  // linear in x1 with slope c per site: forward difference N c, second difference 0 off the seam
  const LatticeTorus line(1, 10);
  DensityField lin(line);
  for (int x = 0; x < 10; ++x) lin.u[x] = 0.1 * x;
  const auto d = derivative_diagnostics(lin, *h);
  CHECK(d.grad == doctest::Approx(10 * 0.9));  // the seam jump dominates the sup
  DensityField interior(line);
  for (int x = 0; x < 10; ++x) interior.u[x] = 0.1 * x;
  CHECK(std::abs(10 * (interior.u[5] - interior.u[4]) - 1.0) < 1e-12);

  auto smooth = [](int N) {
    const LatticeTorus lat(2, N);
    return derivative_diagnostics(sample_field(lat, [](const Point& v) { return 1 + 0.1 * std::sin(2 * pi * v[0]); }),
                                  *cubic())
        .grad;
  };
  const double target = 0.2 * pi;
  CHECK(std::abs(smooth(64) - target) < std::abs(smooth(32) - target));
  CHECK(std::abs(smooth(64) - target) < 1e-2);
}

TEST_CASE("grid refinement") {
  const auto table = cubic_table(5.0);
  auto at = [&](int N) {
    const LatticeTorus lat(2, N);
    auto u0 = sample_field(lat, [](const Point& v) { return 0.5 + 0.25 * std::sin(2 * pi * v[0]) + 0.1 * std::cos(2 * pi * v[1]); });
    return solve(u0, make_pde_params(lat, 4.0, *table), *table, 0.05).snapshots.back();
  };
  const auto a = at(8), b = at(16), c = at(32);
  auto coarse_diff = [](const DensityField& coarse, const DensityField& fine) {
    double m = 0;
    for (std::size_t x = 0; x < coarse.u.size(); ++x) {
      const auto cx = coarse.lattice.coords(x);
      m = std::max(m, std::abs(coarse.u[x] - fine.u[fine.lattice.index({2 * cx[0], 2 * cx[1], 0})]));
    }
    return m;
  };
  const double d1 = coarse_diff(a, b), d2 = coarse_diff(b, c);
  CAPTURE(d1);
  CAPTURE(d2);
  CHECK(d1 / d2 >= 1.8);
}

TEST_CASE("ODE Y") {
  const auto table = cubic_table(3.0);
  CHECK(ode_Y(5.0, 0.8, *table) == 0.8);
  CHECK(ode_Y(0.0, 0.37, *table) == 0.37);
  double prev = 0.51;
  for (double tau : {0.5, 2.0, 8.0, 32.0, 64.0}) {
    const double y = ode_Y(tau, 0.51, *table);
    CHECK(y > prev);
    CHECK(y <= 0.8);
    prev = y;
  }
  CHECK(std::abs(prev - 0.8) < 1e-3);
  CHECK(ode_Y(20.0, 1.0, *table) >= 0.8);
  CHECK(ode_Y(20.0, 1.0, *table) < 0.81);

  // Y_zeta lies between exp(-gamma_bar tau) and exp(max f' tau)
  const double h = 1e-6;
  for (double zeta : {0.1, 0.3, 0.45, 0.55, 0.7, 0.95}) {
    for (double tau : {0.5, 2.0, 5.0}) {
      const double dz = (ode_Y(tau, zeta + h, *table, 1e-13) - ode_Y(tau, zeta, *table, 1e-13)) / h;
      CHECK(dz > std::exp(-table->gamma_bar() * tau) * (1 - 1e-4));
      CHECK(dz < std::exp(table->f_prime_max() * tau) * (1 + 1e-4));
    }
  }
  CHECK_THROWS(ode_Y(1.0, -0.1, *table));
}

TEST_CASE("generation envelopes") {
  const auto table = cubic_table(10.0);
  const LatticeTorus lat(2, 64);
  const double K = 16.0;
  auto u0 = sample_field(lat, [](const Point& v) {
    const double r = std::hypot(v[0] - 0.5, v[1] - 0.5);
    return 0.5 + 0.3 * std::tanh((0.25 - r) / 0.05);
  });
  const auto e0 = generation_envelopes(u0, K, default_C4(*table), 0.0, *table);
  CHECK(e0.lower == u0);
  CHECK(e0.upper.u == u0.u);

  const double tN = generation_time(K, table->gamma());
  auto p = make_pde_params(lat, K, *table);
  double C4 = default_C4(*table);
  bool sandwich = false;
  const auto traj = solve(u0, p, *table, tN, tN / 10);
  REQUIRE(traj.snapshots.size() == 11);
  for (int attempt = 0; attempt < 8 && !sandwich; ++attempt, C4 *= 2) {
    sandwich = true;
    for (const auto& snap : traj.snapshots) {
      const auto env = generation_envelopes(u0, K, C4, snap.t, *table);
      for (std::size_t x = 0; x < lat.size(); ++x) {
        CHECK(env.lower.u[x] <= env.upper.u[x]);
        if (env.lower.u[x] > snap.u[x] + 1e-12 || snap.u[x] > env.upper.u[x] + 1e-12) sandwich = false;
      }
    }
  }
  CHECK(sandwich);
}

TEST_CASE("field export") {
  const auto dir = std::filesystem::temp_directory_path() / "meancurve_pde_test";
  std::filesystem::create_directories(dir);
  Rng rng(6);
  auto f = random_field(LatticeTorus(3, 4), rng, 0, 1);
  f.t = 0.5;
  write_field_binary(f, dir / "u.bin");
  CHECK(read_field_binary(dir / "u.bin") == f);
  write_field_csv(f, dir / "u.csv");
  CHECK(std::filesystem::file_size(dir / "u.csv") > 64 * 8);
  std::filesystem::remove_all(dir);
}
