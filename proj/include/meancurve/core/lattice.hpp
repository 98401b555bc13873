#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace meancurve {

/// Integer lattice offset; only the first `d` components are meaningful.
using Offset = std::array<int, 3>;
/// Point of the continuum torus [0,1)^d; only the first `d` components used.
using Point = std::array<double, 3>;

/// The discrete torus (Z / N Z)^d for d in {1, 2, 3}, with flat row-major
/// indexing (the last axis varies fastest) and periodic wrap.
class LatticeTorus {
 public:
  LatticeTorus(int d, int N);

  int dim() const noexcept { return d_; }
  int side() const noexcept { return N_; }
  std::size_t size() const noexcept { return size_; }

  std::size_t index(const Offset& x) const noexcept;
  Offset coords(std::size_t idx) const noexcept;

  /// Site reached from `idx` by the lattice offset `e`, wrapping periodically.
  std::size_t shift(std::size_t idx, const Offset& e) const noexcept;

  /// Neighbour table: neighbors(idx)[2*i] = idx + e_i, [2*i+1] = idx - e_i.
  std::span<const std::uint32_t> neighbors(std::size_t idx) const noexcept {
    return {neighbor_table_.data() + idx * 2 * d_, static_cast<std::size_t>(2 * d_)};
  }
  std::uint32_t neighbor(std::size_t idx, int axis, bool forward) const noexcept {
    return neighbor_table_[idx * 2 * d_ + 2 * axis + (forward ? 0 : 1)];
  }

  /// Macroscopic position x/N of a site.
  Point position(std::size_t idx) const noexcept;

  bool operator==(const LatticeTorus& o) const noexcept { return d_ == o.d_ && N_ == o.N_; }

 private:
  int d_;
  int N_;
  std::size_t size_;
  std::array<std::size_t, 3> stride_{};
  std::vector<std::uint32_t> neighbor_table_;
};

/// Unit vector along `axis`.
Offset unit_offset(int axis, int sign = 1);

}  // namespace meancurve
