#include "meancurve/core/lattice.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace meancurve {

LatticeTorus::LatticeTorus(int d, int N) : d_(d), N_(N), size_(1) {
  if (d < 1 || d > 3) throw std::invalid_argument("LatticeTorus: d must be 1, 2 or 3, got " + std::to_string(d));
  if (N < 2) throw std::invalid_argument("LatticeTorus: N must be >= 2, got " + std::to_string(N));
  for (int i = 0; i < d; ++i) size_ *= static_cast<std::size_t>(N);
  if (size_ > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("LatticeTorus: too many sites");
  std::size_t s = 1;
  for (int i = d - 1; i >= 0; --i) {
    stride_[i] = s;
    s *= static_cast<std::size_t>(N);
  }

  neighbor_table_.resize(size_ * 2 * d_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    for (int i = 0; i < d_; ++i) {
      const std::size_t c = (idx / stride_[i]) % N_;
      const std::size_t up = c + 1 == static_cast<std::size_t>(N_) ? idx - c * stride_[i] : idx + stride_[i];
      const std::size_t down = c == 0 ? idx + (N_ - 1) * stride_[i] : idx - stride_[i];
      neighbor_table_[idx * 2 * d_ + 2 * i] = static_cast<std::uint32_t>(up);
      neighbor_table_[idx * 2 * d_ + 2 * i + 1] = static_cast<std::uint32_t>(down);
    }
  }
}

std::size_t LatticeTorus::index(const Offset& x) const noexcept {
  std::size_t idx = 0;
  for (int i = 0; i < d_; ++i) {
    int c = x[i] % N_;
    if (c < 0) c += N_;
    idx += static_cast<std::size_t>(c) * stride_[i];
  }
  return idx;
}

Offset LatticeTorus::coords(std::size_t idx) const noexcept {
  Offset x{0, 0, 0};
  for (int i = 0; i < d_; ++i) x[i] = static_cast<int>((idx / stride_[i]) % N_);
  return x;
}

std::size_t LatticeTorus::shift(std::size_t idx, const Offset& e) const noexcept {
  Offset x = coords(idx);
  for (int i = 0; i < d_; ++i) x[i] += e[i];
  return index(x);
}

Point LatticeTorus::position(std::size_t idx) const noexcept {
  const Offset x = coords(idx);
  Point v{0.0, 0.0, 0.0};
  for (int i = 0; i < d_; ++i) v[i] = static_cast<double>(x[i]) / N_;
  return v;
}

Offset unit_offset(int axis, int sign) {
  Offset e{0, 0, 0};
  e[axis] = sign;
  return e;
}

}  // namespace meancurve
