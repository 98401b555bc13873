#include "meancurve/rates/jump_rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace meancurve {

JumpRate::JumpRate(std::vector<double> table, Tail tail, double lipschitz, std::string kind)
    : table_(std::move(table)), tail_(tail), lipschitz_(lipschitz), kind_(std::move(kind)) {
  if (table_.size() < 2) throw std::invalid_argument("JumpRate: need at least g(1)");
  if (table_[0] != 0.0) throw std::invalid_argument("JumpRate: g(0) must be 0");
  const auto k_max = static_cast<double>(table_.size() - 1);
  slope_ = table_.back() / k_max;

  double needed_C = 0.0;
  for (std::size_t k = 1; k < table_.size(); ++k) {
    if (!(table_[k] > 0.0) || !std::isfinite(table_[k]))
      throw std::invalid_argument("JumpRate: g(k) must be positive and finite for k >= 1");
    needed_C = std::max(needed_C, table_[k] / static_cast<double>(k));
  }
  if (lipschitz_ <= 0.0) lipschitz_ = needed_C;
  if (needed_C > lipschitz_ * (1.0 + 1e-12))
    throw std::invalid_argument("JumpRate: g(k) <= C k violated on the tabulated range");

  log_factorial_.resize(kLogFactorialCap + 1);
  log_factorial_[0] = 0.0;
  for (int k = 1; k <= kLogFactorialCap; ++k) log_factorial_[k] = log_factorial_[k - 1] + std::log((*this)(k));
}

JumpRate JumpRate::linear(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("JumpRate::linear: slope must be positive");
  return JumpRate({0.0, c}, Tail::Linear, c, "linear");
}

JumpRate JumpRate::indicator() { return JumpRate({0.0, 1.0}, Tail::Constant, 1.0, "indicator"); }

JumpRate JumpRate::capped(int cap) {
  if (cap < 1) throw std::invalid_argument("JumpRate::capped: cap must be >= 1");
  std::vector<double> t(cap + 1);
  for (int k = 0; k <= cap; ++k) t[k] = k;
  return JumpRate(std::move(t), Tail::Constant, 1.0, "capped");
}

JumpRate JumpRate::tabulated(std::vector<double> values, Tail tail, double lipschitz_C) {
  values.insert(values.begin(), 0.0);
  return JumpRate(std::move(values), tail, lipschitz_C, "table");
}

double JumpRate::log_factorial(std::int64_t k) const {
  if (k <= kLogFactorialCap) return log_factorial_[std::max<std::int64_t>(k, 0)];
  double s = log_factorial_.back();
  for (std::int64_t j = kLogFactorialCap + 1; j <= k; ++j) s += std::log((*this)(j));
  return s;
}

}  // namespace meancurve
