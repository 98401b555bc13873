#pragma once

#include <cstddef>
#include <vector>

namespace meancurve {

/// Binary indexed tree over nonnegative weights with prefix search.
///
/// Point updates add the difference to the stored value, so rounding error
/// accumulates in the partial sums; callers rebuild() periodically.
class FenwickTree {
 public:
  FenwickTree() = default;
  explicit FenwickTree(std::size_t n) : values_(n, 0.0), tree_(n + 1, 0.0) {
    top_bit_ = 1;
    while (top_bit_ * 2 <= n) top_bit_ *= 2;
  }

  std::size_t size() const noexcept { return values_.size(); }
  double value(std::size_t i) const noexcept { return values_[i]; }

  void set(std::size_t i, double v) noexcept {
    const double delta = v - values_[i];
    if (delta == 0.0) return;
    values_[i] = v;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  /// Recomputes all partial sums from the stored values in O(n).
  void rebuild() noexcept {
    for (std::size_t k = 1; k < tree_.size(); ++k) tree_[k] = values_[k - 1];
    for (std::size_t k = 1; k < tree_.size(); ++k) {
      const std::size_t parent = k + (k & (~k + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[k];
    }
  }

  double total() const noexcept {
    double s = 0.0;
    for (std::size_t k = values_.size(); k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  double prefix(std::size_t count) const noexcept {
    double s = 0.0;
    for (std::size_t k = count; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  /// Smallest i with prefix(i + 1) > target. `remainder` receives
  /// target - prefix(i). Returns size() if target >= total().
  std::size_t find(double target, double& remainder) const noexcept {
    std::size_t pos = 0;
    for (std::size_t step = top_bit_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    remainder = target;
    return pos;
  }

 private:
  std::vector<double> values_;
  std::vector<double> tree_;
  std::size_t top_bit_ = 0;
};

}  // namespace meancurve
