#include "meancurve/rates/rate_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/roots.hpp"
#include "meancurve/rates/reaction.hpp"

namespace meancurve {

void GlauberRateSpec::validate() const {
  if (!(C > 0.0)) throw std::invalid_argument("glauber: C must be positive");
  if (!(0.0 < a_minus && a_minus < a_star && a_star < a_plus && a_plus < 1.0)) {
    std::ostringstream msg;
    msg << "glauber: need 0 < a_minus < a_star < a_plus < 1, got " << a_minus << ", " << a_star << ", " << a_plus;
    throw std::invalid_argument(msg.str());
  }
  if (offsets.empty()) return;
  if (offsets.size() != 3) throw std::invalid_argument("glauber: exactly three offsets e1, e2, e3 are required");
  const Offset zero{0, 0, 0};
  for (std::size_t i = 0; i < 3; ++i) {
    if (offsets[i] == zero) throw std::invalid_argument("glauber: offsets must be nonzero");
    for (std::size_t j = i + 1; j < 3; ++j)
      if (offsets[i] == offsets[j]) throw std::invalid_argument("glauber: offsets must be distinct");
  }
}

std::array<Offset, 3> default_offsets(int d) {
  if (d == 1) return {Offset{1, 0, 0}, Offset{2, 0, 0}, Offset{-1, 0, 0}};
  return {Offset{1, 0, 0}, Offset{0, 1, 0}, Offset{-1, 0, 0}};
}

RateModel::RateModel(JumpRate g, GlauberRateSpec glauber)
    : g_(std::move(g)), glauber_(std::move(glauber)) {
  glauber_.validate();
  s1_ = glauber_.s1();
  s2_ = glauber_.s2();
  s3_ = glauber_.s3();
}

RateModel RateModel::with_a_star(double a_star) const {
  GlauberRateSpec spec = glauber_;
  spec.a_star = a_star;
  return RateModel(g_, spec);
}

std::array<Offset, 3> RateModel::offsets(int d) const {
  if (glauber_.offsets.empty()) return default_offsets(d);
  return {glauber_.offsets[0], glauber_.offsets[1], glauber_.offsets[2]};
}

LocalEquilibrium RateModel::local_equilibrium(double rho) const {
  LocalEquilibrium eq{};
  eq.rho = rho;
  if (rho == 0.0) {
    eq.phi = 0.0;
    eq.phi_prime = g_(1);
    eq.r = 0.0;
    eq.v = 1.0 / g_(1);
  } else {
    const Marginal m = Marginal::from_density(g_, rho);
    eq.phi = m.phi();
    eq.phi_prime = m.phi() / m.variance();
    eq.r = m.occupied_probability();
    eq.v = eq.r / eq.phi;
  }
  eq.f = -glauber_.C * eq.v * (eq.r - glauber_.a_minus) * (eq.r - glauber_.a_star) * (eq.r - glauber_.a_plus);
  return eq;
}

double RateModel::occupied_fraction(double rho) const {
  if (rho == 0.0) return 0.0;
  return Marginal::from_density(g_, rho).occupied_probability();
}

double RateModel::inverse_rate_mean(double rho) const {
  if (rho == 0.0) return 1.0 / g_(1);
  const Marginal m = Marginal::from_density(g_, rho);
  return m.occupied_probability() / m.phi();
}

double RateModel::occupancy_inverse(double a) const {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("occupancy_inverse: a must lie in (0, 1)");
  // r = (Z - 1) / Z is increasing in phi; solve in phi, then map to rho.
  auto r_of_phi = [&](double phi) {
    try {
      const auto pz = partition_function(g_, phi);
      return (pz.Z - 1.0) / pz.Z - a;
    } catch (const NonConvergent&) {
      return 1.0 - a;
    }
  };
  double hi = std::isfinite(g_.phi_star()) ? g_.phi_star() : 1.0;
  if (!std::isfinite(g_.phi_star())) {
    int guard = 0;
    while (r_of_phi(hi) < 0.0) {
      hi *= 2.0;
      if (++guard > 200) throw NonConvergent("occupancy_inverse: failed to bracket");
    }
  }
  const double phi = bisect(r_of_phi, 0.0, hi, 0.0);
  return mean_density(g_, phi);
}

double reaction_f(const RateModel& model, double rho) { return model.local_equilibrium(rho).f; }

ParticleHydrodynamics::ParticleHydrodynamics(RateModel model) : model_(std::move(model)) {
  const auto& gl = model_.glauber();
  const double lo = 0.5 * model_.occupancy_inverse(gl.a_minus);
  const double hi = 2.0 * model_.occupancy_inverse(gl.a_plus);
  zeros_ = find_zeros([this](double u) { return f(u); }, lo, hi);
}

}  // namespace meancurve
