#pragma once

#include <functional>
#include <memory>
#include <utility>

namespace meancurve {

/// The three zeros of a bistable reaction f: f'(alpha_minus) < 0,
/// f'(alpha_star) > 0, f'(alpha_plus) < 0.
struct ReactionZeros {
  double alpha_minus = 0.0;
  double alpha_star = 0.0;
  double alpha_plus = 0.0;
};

/// Macroscopic coefficients of the reaction-diffusion equation
///   d_t u = Laplacian phi(u) + K f(u)
/// together with the zeros of f. Implementations are immutable and may be
/// shared between threads.
class Hydrodynamics {
 public:
  virtual ~Hydrodynamics() = default;

  virtual double phi(double u) const = 0;
  virtual double phi_prime(double u) const = 0;
  virtual double f(double u) const = 0;
  /// Defaults to a five-point central difference (one-sided near u = 0).
  virtual double f_prime(double u) const;
  /// (f(u), phi'(u)); particle-backed models share one fugacity solve.
  virtual std::pair<double, double> f_and_phi_prime(double u) const { return {f(u), phi_prime(u)}; }

  const ReactionZeros& zeros() const noexcept { return zeros_; }
  double alpha_minus() const noexcept { return zeros_.alpha_minus; }
  double alpha_star() const noexcept { return zeros_.alpha_star; }
  double alpha_plus() const noexcept { return zeros_.alpha_plus; }

 protected:
  ReactionZeros zeros_{};
};

/// phi and f given as plain callables; used for synthetic benchmarks such as
/// linear diffusion with a cubic reaction.
class SyntheticHydrodynamics final : public Hydrodynamics {
 public:
  using Fn = std::function<double(double)>;

  SyntheticHydrodynamics(Fn phi, Fn phi_prime, Fn f, ReactionZeros zeros, Fn f_prime = {});

  /// phi(u) = u, f(u) = -scale (u - a_minus)(u - a_star)(u - a_plus).
  static SyntheticHydrodynamics linear_cubic(double a_minus, double a_star, double a_plus, double scale = 1.0);

  double phi(double u) const override { return phi_(u); }
  double phi_prime(double u) const override { return phi_prime_(u); }
  double f(double u) const override { return f_(u); }
  double f_prime(double u) const override { return f_prime_ ? f_prime_(u) : Hydrodynamics::f_prime(u); }

 private:
  Fn phi_, phi_prime_, f_, f_prime_;
};

/// Same phi, reaction multiplied by a positive constant. Zeros are unchanged.
class ScaledReaction final : public Hydrodynamics {
 public:
  ScaledReaction(std::shared_ptr<const Hydrodynamics> base, double factor);
  double phi(double u) const override { return base_->phi(u); }
  double phi_prime(double u) const override { return base_->phi_prime(u); }
  double f(double u) const override { return factor_ * base_->f(u); }
  double f_prime(double u) const override { return factor_ * base_->f_prime(u); }
  std::pair<double, double> f_and_phi_prime(double u) const override {
    auto [fv, dp] = base_->f_and_phi_prime(u);
    return {factor_ * fv, dp};
  }

 private:
  std::shared_ptr<const Hydrodynamics> base_;
  double factor_;
};

}  // namespace meancurve
