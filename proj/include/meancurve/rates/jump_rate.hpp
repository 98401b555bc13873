#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace meancurve {

/// Zero-range jump rate g(k): g(0) = 0, g(k) > 0 for k >= 1, g(k) <= C k.
///
/// Values are tabulated for k <= k_max; beyond that a declared tail rule
/// applies (linear g(k) = slope * k, or constant g(k) = g(k_max)). log g(k)!
/// is precomputed up to `kLogFactorialCap` so that marginal series are
/// cheap and the object stays immutable (safe to share between threads).
class JumpRate {
 public:
  enum class Tail { Linear, Constant };
  static constexpr int kLogFactorialCap = 10000;

  /// g(k) = c k (independent particles when c = 1).
  static JumpRate linear(double c = 1.0);
  /// g(k) = 1(k >= 1).
  static JumpRate indicator();
  /// g(k) = min(k, cap): linear start, bounded tail.
  static JumpRate capped(int cap);
  /// g(1..k_max) = values, extended by `tail`. For Tail::Linear the slope is
  /// g(k_max)/k_max. `lipschitz_C <= 0` means "infer the smallest valid C".
  static JumpRate tabulated(std::vector<double> values, Tail tail, double lipschitz_C = 0.0);

  double operator()(std::int64_t k) const noexcept {
    if (k <= 0) return 0.0;
    if (k < static_cast<std::int64_t>(table_.size())) return table_[k];
    return tail_ == Tail::Linear ? slope_ * static_cast<double>(k) : table_.back();
  }

  /// log(g(1) * ... * g(k)); 0 for k = 0.
  double log_factorial(std::int64_t k) const;

  /// Constant C of the linear-growth bound g(k) <= C k.
  double lipschitz() const noexcept { return lipschitz_; }
  /// Radius of convergence phi* = liminf g(k) of the partition series.
  double phi_star() const noexcept {
    return tail_ == Tail::Linear ? std::numeric_limits<double>::infinity() : table_.back();
  }
  /// Human-readable family tag ("linear", "indicator", "capped", "table").
  const std::string& kind() const noexcept { return kind_; }
  Tail tail() const noexcept { return tail_; }
  /// Tabulated values g(0..k_max).
  const std::vector<double>& table() const noexcept { return table_; }

 private:
  JumpRate(std::vector<double> table, Tail tail, double lipschitz, std::string kind);

  std::vector<double> table_;  // g(0..k_max)
  Tail tail_;
  double slope_ = 0.0;
  double lipschitz_;
  std::string kind_;
  std::vector<double> log_factorial_;  // log g(k)! for k <= kLogFactorialCap
};

}  // namespace meancurve
