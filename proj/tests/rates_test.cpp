#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/quadrature.hpp"
#include "meancurve/rates/adjoint.hpp"
#include "meancurve/rates/ensemble.hpp"
#include "meancurve/rates/marginal.hpp"
#include "meancurve/rates/rate_model.hpp"
#include "meancurve/rates/rate_model_json.hpp"
#include "meancurve/rates/reaction.hpp"

using namespace meancurve;

namespace {

std::vector<JumpRate> families() { return {JumpRate::linear(), JumpRate::indicator(), JumpRate::capped(2)}; }

GlauberRateSpec spec(double a_minus, double a_star, double a_plus, double C = 1.0) {
  GlauberRateSpec s;
  s.C = C;
  s.a_minus = a_minus;
  s.a_star = a_star;
  s.a_plus = a_plus;
  return s;
}

// Enumerates {0..cap}^n in lexicographic order.
template <class Visit>
void for_each_state(std::size_t n, int cap, Visit&& visit) {
  std::vector<int> eta(n, 0);
  while (true) {
    visit(eta);
    std::size_t i = 0;
    while (i < n && ++eta[i] > cap) eta[i++] = 0;
    if (i == n) return;
  }
}

double product_measure(const std::vector<Marginal>& nu, const std::vector<int>& eta) {
  double p = 1.0;
  for (std::size_t x = 0; x < eta.size(); ++x) p *= nu[x].pmf(eta[x]);
  return p;
}

// (L_ZR f)(eta) for f = indicator of `xi`, written out from the generator.
double zero_range_generator_on_indicator(const RateModel& model, const LatticeTorus& lat, const std::vector<int>& eta,
                                         const std::vector<int>& xi) {
  const double f_eta = eta == xi ? 1.0 : 0.0;
  double out = 0.0;
  for (std::size_t x = 0; x < eta.size(); ++x) {
    if (eta[x] == 0) continue;
    for (auto y : lat.neighbors(x)) {
      auto moved = eta;
      moved[x] -= 1;
      moved[y] += 1;
      out += model.jump_rate()(eta[x]) * ((moved == xi ? 1.0 : 0.0) - f_eta);
    }
  }
  return out;
}

double glauber_generator_on_indicator(const RateModel& model, const LatticeTorus& lat, const std::vector<int>& eta,
                                      const std::vector<int>& xi) {
  const double f_eta = eta == xi ? 1.0 : 0.0;
  double out = 0.0;
  for (std::size_t x = 0; x < eta.size(); ++x) {
    auto up = eta;
    up[x] += 1;
    out += creation_rate_at(model, lat, eta, x) * ((up == xi ? 1.0 : 0.0) - f_eta);
    if (eta[x] >= 1) {
      auto down = eta;
      down[x] -= 1;
      out += annihilation_rate_at(model, lat, eta, x) * ((down == xi ? 1.0 : 0.0) - f_eta);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("partition function closed forms") {
  const auto z0 = partition_function(JumpRate::linear(), 0.0);
  CHECK(z0.Z == 1.0);
  CHECK(z0.K_trunc == 0);
  CHECK(partition_function(JumpRate::linear(), 1.0).Z == doctest::Approx(std::numbers::e).epsilon(1e-14));
  CHECK(partition_function(JumpRate::indicator(), 0.5).Z == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(partition_function(JumpRate::indicator(), 1.0), NonConvergent);
  CHECK_THROWS_AS(partition_function(JumpRate::indicator(), 0.999999999), NonConvergent);
}

TEST_CASE("fugacity and mean density") {
  CHECK(fugacity(JumpRate::linear(), 0.0) == 0.0);
  CHECK(fugacity(JumpRate::indicator(), 1.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fugacity(JumpRate::linear(), 2.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(mean_density(JumpRate::linear(), 0.0) == 0.0);
  CHECK(mean_density(JumpRate::indicator(), 0.5) == doctest::Approx(1.0).epsilon(1e-13));

  for (const auto& g : families()) {
    for (double rho : {0.1, 1.0, 5.0}) {
      CAPTURE(g.kind());
      CAPTURE(rho);
      CHECK(std::abs(mean_density(g, fugacity(g, rho)) - rho) < 1e-8);
    }
  }
  // indicator: phi = rho / (1 + rho)
  for (double rho : {0.05, 0.7, 3.0, 9.0}) CHECK(fugacity(JumpRate::indicator(), rho) == doctest::Approx(rho / (1 + rho)).epsilon(1e-12));
}

TEST_CASE("fugacity is strictly increasing and respects linear bounds") {
  for (const auto& g : families()) {
    double prev = -1.0;
    for (int i = 1; i <= 50; ++i) {
      const double phi = fugacity(g, 0.2 * i);
      CHECK(phi > prev);
      prev = phi;
    }
  }
  // a k <= g(k) <= b k with a = 1, b = 1.5
  std::vector<double> table;
  for (int k = 1; k <= 40; ++k) table.push_back(k * (1.0 + 0.5 * std::pow(std::sin(k), 2)));
  const auto g = JumpRate::tabulated(table, JumpRate::Tail::Linear, 1.5);
  for (double rho : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const double phi = fugacity(g, rho);
    CHECK(phi >= rho * (1.0 - 1e-12));
    CHECK(phi <= 1.5 * rho * (1.0 + 1e-12));
  }
}

TEST_CASE("marginal pmf and identities") {
  CHECK(marginal_pmf(JumpRate::linear(), 0.0, 0) == 1.0);
  CHECK(marginal_pmf(JumpRate::linear(), 0.0, 3) == 0.0);
  CHECK(marginal_pmf(JumpRate::linear(), 2.0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK(marginal_pmf(JumpRate::indicator(), 1.0, 2) == doctest::Approx(0.125).epsilon(1e-13));

  for (const auto& g : families()) {
    for (double rho : {0.3, 2.0, 5.0}) {
      const auto m = Marginal::from_density(g, rho);
      double total = 0.0;
      for (double p : m.pmf()) total += p;
      CHECK(std::abs(total - 1.0) < 1e-14);
      CHECK(std::abs(m.rho() - rho) < 10 * 1e-14 * std::max(1.0, rho));
      CHECK(std::abs(m.mean_g() - m.phi()) < 1e-13 * std::max(1.0, m.phi()));
    }
  }
  // phi' = phi / Var against a central difference of the inverse map
  for (const auto& g : families()) {
    const double rho = 1.3, h = 1e-5;
    const double fd = (fugacity(g, rho + h) - fugacity(g, rho - h)) / (2 * h);
    CHECK(fugacity_derivative(g, rho) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("sampling matches mean and fugacity") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) CHECK(sample_marginal(JumpRate::linear(), 0.0, rng) == 0);

  const auto g = JumpRate::linear();
  const auto m = Marginal::from_density(g, 3.0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += m.sample(rng);
  CHECK(std::abs(sum / n - 3.0) < 3.0 * std::sqrt(3.0 / n));
}

TEST_CASE("ensemble averages") {
  const auto g = JumpRate::linear();
  CHECK(ensemble_average(g, [](auto) { return 1.0; }, 2, 1.4).value == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& gg : families()) {
    const auto est = ensemble_average(gg, [&](std::span<const int> e) { return gg(e[0]); }, 1, 2.0);
    CHECK(est.exact);
    CHECK(est.value == doctest::Approx(fugacity(gg, 2.0)).epsilon(1e-12));
  }
  const auto tail = ensemble_average(g, [](std::span<const int> e) { return e[0] >= 1 ? 1.0 : 0.0; }, 1, 1.0);
  CHECK(tail.value == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));

  EnsembleOptions tight;
  tight.state_budget = 10;
  tight.allow_monte_carlo = false;
  CHECK_THROWS_AS(ensemble_average(g, [](auto) { return 1.0; }, 4, 1.0, tight), WindowTooLarge);
  tight.allow_monte_carlo = true;
  tight.mc_samples = 20000;
  const auto mc = ensemble_average(g, [](std::span<const int> e) { return double(e[0] + e[3]); }, 4, 1.0, tight);
  CHECK_FALSE(mc.exact);
  CHECK(std::abs(mc.value - 2.0) < 5 * mc.std_error);
}

TEST_CASE("reaction function closed form") {
  SUBCASE("zero at the constructed a*") {
    const RateModel model(JumpRate::indicator(), spec(0.2, 0.45, 0.8));
    const double alpha_star = model.occupancy_inverse(0.45);
    CHECK(std::abs(reaction_f(model, alpha_star)) < 1e-14);
  }
  SUBCASE("Poisson family zeros") {
    const RateModel model(JumpRate::linear(), spec(0.2, 0.5, 0.8));
    CHECK(model.occupancy_inverse(0.2) == doctest::Approx(-std::log(0.8)).epsilon(1e-12));
    CHECK(std::abs(reaction_f(model, -std::log(0.8))) < 1e-14);
    CHECK(reaction_f(model, 0.0) == doctest::Approx(0.2 * 0.5 * 0.8));  // v(0) = 1/g(1)
  }
  SUBCASE("closed form equals the window average of c+ - c-") {
    for (const auto& g : families()) {
      const RateModel model(g, spec(0.15, 0.4, 0.85, 2.0));
      auto h = [&](std::span<const int> e) {
        return model.creation_rate(e[0], e[1], e[2], e[3]) - model.annihilation_rate(e[0], e[1], e[2], e[3]);
      };
      for (double rho : {0.5, 1.0, 2.0}) {
        EnsembleOptions full;
        full.state_budget = 100'000'000;
        full.enumeration_tail = 1e-14;
        const auto exact = ensemble_average(g, h, 4, rho, full);
        REQUIRE(exact.exact);
        CHECK(std::abs(exact.value - reaction_f(model, rho)) < 1e-11);
        EnsembleOptions mc;
        mc.state_budget = 0;
        mc.mc_samples = 50000;
        mc.seed = static_cast<std::uint64_t>(rho * 1000);
        const auto est = ensemble_average(g, h, 4, rho, mc);
        CHECK(std::abs(est.value - reaction_f(model, rho)) < 5 * est.std_error);
      }
    }
  }
  SUBCASE("MC agreement at random densities") {
    const RateModel model(JumpRate::capped(2), spec(0.2, 0.5, 0.8, 1.0));
    auto h = [&](std::span<const int> e) {
      return model.creation_rate(e[0], e[1], e[2], e[3]) - model.annihilation_rate(e[0], e[1], e[2], e[3]);
    };
    Rng rng(2024);
    for (int i = 0; i < 10; ++i) {
      const double rho = 0.05 + 4.0 * rng.uniform();
      EnsembleOptions mc;
      mc.state_budget = 0;
      mc.mc_samples = 40000;
      mc.seed = 100 + i;
      const auto est = ensemble_average(model.jump_rate(), h, 4, rho, mc);
      CHECK(std::abs(est.value - reaction_f(model, rho)) < 5 * est.std_error);
    }
  }
}

TEST_CASE("find_zeros") {
  SUBCASE("example family with linear g") {
    const RateModel model(JumpRate::linear(), spec(0.2, 0.5, 0.8));
    const auto z = find_zeros([&](double r) { return reaction_f(model, r); }, 0.05, 4.0);
    CHECK(z.alpha_minus == doctest::Approx(-std::log(0.8)).epsilon(1e-11));
    CHECK(z.alpha_star == doctest::Approx(-std::log(0.5)).epsilon(1e-11));
    CHECK(z.alpha_plus == doctest::Approx(-std::log(0.2)).epsilon(1e-11));
  }
  SUBCASE("shifted cubic") {
    auto f = [](double u) { const double w = u - 2.0; return w * (1.0 - w * w); };
    const auto z = find_zeros(f, 0.3, 3.7);
    CHECK(std::abs(z.alpha_minus - 1.0) < 1e-10);
    CHECK(std::abs(z.alpha_star - 2.0) < 1e-10);
    CHECK(std::abs(z.alpha_plus - 3.0) < 1e-10);
    const auto zp = find_zeros([&](double u) { return f(u) + 1e-3; }, 0.3, 3.7);
    CHECK(zp.alpha_star < 2.0);
  }
  SUBCASE("violations") {
    CHECK_THROWS_AS(find_zeros([](double u) { return 1.0 - u; }, 0.0, 3.0), BistabilityViolated);
    // three zeros with the wrong derivative pattern
    CHECK_THROWS_AS(find_zeros([](double u) { return (u - 1) * (u - 2) * (u - 3); }, 0.3, 3.7), BistabilityViolated);
  }
}

TEST_CASE("balance calibration") {
  SUBCASE("symmetric synthetic family") {
    auto family = [](double a, double u) { return -(u - 0.2) * (u - a) * (u - 0.8); };
    const double a = calibrate_balance(family, [](double) { return 1.0; }, 0.2, 0.8, 0.2, 0.8);
    CHECK(a == doctest::Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("Poisson family, independent quadrature") {
    const RateModel base(JumpRate::linear(), spec(0.2, 0.5, 0.8));
    const double a_star = calibrate_balance(base);
    CHECK(a_star > 0.2);
    CHECK(a_star < 0.8);
    const RateModel model = base.with_a_star(a_star);
    const double am = model.occupancy_inverse(0.2), ap = model.occupancy_inverse(0.8);
    // phi(u) = u for this family, so the balance integral is int f.
    const double resid = integrate_adaptive([&](double u) { return reaction_f(model, u); }, am, ap, 1e-13, 1e-14);
    CHECK(std::abs(resid) < 1e-10);
    CHECK(std::abs(calibrate_balance(base, 128) - a_star) < 1e-8);
  }
  SUBCASE("indicator family") {
    const RateModel base(JumpRate::indicator(), spec(0.2, 0.5, 0.8, 3.0));
    const RateModel model = base.with_a_star(calibrate_balance(base));
    const double am = model.occupancy_inverse(0.2), ap = model.occupancy_inverse(0.8);
    CHECK(am == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(ap == doctest::Approx(4.0).epsilon(1e-12));
    const double resid = integrate_adaptive(
        [&](double u) { return reaction_f(model, u) / ((1 + u) * (1 + u)); }, am, ap, 1e-13, 1e-14);
    CHECK(std::abs(resid) < 1e-10);
  }
  SUBCASE("no sign change") {
    auto family = [](double, double u) { return 1.0 + u; };
    CHECK_THROWS_AS(calibrate_balance(family, [](double) { return 1.0; }, 0.2, 0.8, 0.2, 0.8), NoSignChange);
  }
}

TEST_CASE("adjoint of the generators against brute force") {
  const RateModel model(JumpRate::capped(2), spec(0.2, 0.5, 0.8, 1.5));

  SUBCASE("constant profile gives zero zero-range adjoint") {
    const LatticeTorus lat(1, 4);
    const std::vector<double> u(4, 1.3);
    for_each_state(4, 2, [&](const std::vector<int>& eta) {
      CHECK(std::abs(adjoint_one(model, lat, u, eta).zero_range) < 1e-14);
    });
  }

  auto check_identity = [&](const LatticeTorus& lat, const std::vector<double>& u, int cap) {
    std::vector<Marginal> nu;
    for (double ux : u) nu.push_back(Marginal::from_density(model.jump_rate(), ux));
    double worst_zr = 0.0, worst_g = 0.0;
    for_each_state(lat.size(), cap - 2, [&](const std::vector<int>& xi) {
      double lhs_zr = 0.0, lhs_g = 0.0;
      for_each_state(lat.size(), cap, [&](const std::vector<int>& eta) {
        const double w = product_measure(nu, eta);
        lhs_zr += w * zero_range_generator_on_indicator(model, lat, eta, xi);
        lhs_g += w * glauber_generator_on_indicator(model, lat, eta, xi);
      });
      const auto adj = adjoint_one(model, lat, u, xi);
      const double p = product_measure(nu, xi);
      worst_zr = std::max(worst_zr, std::abs(lhs_zr - p * adj.zero_range));
      worst_g = std::max(worst_g, std::abs(lhs_g - p * adj.glauber));
    });
    CHECK(worst_zr < 1e-12);
    CHECK(worst_g < 1e-12);
  };

  SUBCASE("two sites, cap 4") { check_identity(LatticeTorus(1, 2), {0.7, 1.9}, 4); }
  SUBCASE("four sites, cap 3") { check_identity(LatticeTorus(1, 4), {0.4, 1.1, 2.3, 0.9}, 3); }
}

TEST_CASE("zero-range stationarity of the homogeneous product measure") {
  const LatticeTorus lat(1, 2);
  for (const auto& g : families()) {
    const RateModel model(g, spec(0.2, 0.5, 0.8));
    const auto nu = Marginal::from_density(g, 1.2);
    const std::vector<Marginal> nus{nu, nu};
    const int cap = 5;
    for_each_state(2, cap - 2, [&](const std::vector<int>& xi) {
      double lhs = 0.0;
      for_each_state(2, cap, [&](const std::vector<int>& eta) {
        lhs += product_measure(nus, eta) * zero_range_generator_on_indicator(model, lat, eta, xi);
      });
      CHECK(std::abs(lhs) < 1e-12);
    });
  }
}

TEST_CASE("rate model JSON") {
  const auto j = nlohmann::json::parse(R"({
    "g": {"kind": "indicator"},
    "glauber": {"C": 2.0, "a_minus": 0.2, "a_plus": 0.8, "a_star": "auto"},
    "offsets": [[1, 0], [0, 1], [-1, 0]]
  })");
  const auto s = rate_model_spec_from_json(j);
  CHECK(s.a_star_auto);
  CHECK(rate_model_spec_from_json(to_json(s)) == s);

  const auto model = s.build();
  CHECK(model.glauber().a_star > 0.2);
  CHECK(model.glauber().a_star < 0.8);

  auto bad = j;
  bad["glauber"]["a_sharp"] = 0.5;
  try {
    rate_model_spec_from_json(bad);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "/glauber/a_sharp");
  }
  auto bad_offsets = j;
  bad_offsets["offsets"] = {{1, 0}, {1, 0}, {-1, 0}};
  CHECK_THROWS_AS(rate_model_spec_from_json(bad_offsets), SchemaError);
}

TEST_CASE("jump rate validation") {
  CHECK_THROWS(JumpRate::tabulated({1.0, 0.0}, JumpRate::Tail::Constant));
  CHECK_THROWS(JumpRate::tabulated({1.0, 5.0}, JumpRate::Tail::Constant, 1.0));
  const auto g = JumpRate::tabulated({1.0, 3.0}, JumpRate::Tail::Linear);
  CHECK(g.lipschitz() == doctest::Approx(1.5));
  CHECK(g(10) == doctest::Approx(15.0));
  CHECK(JumpRate::capped(2)(100) == 2.0);
  CHECK_THROWS(GlauberRateSpec{1.0, 0.5, 0.4, 0.8, {}}.validate());
}
