#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace meancurve {

/// splitmix64 finalizer; used to derive well-separated stream seeds from a
/// user seed and a replica index.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Random source with bit-reproducible draws across standard libraries
/// (std:: distributions are implementation-defined, so we do not use them).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }

  double exponential(double rate) { return -std::log(uniform_open_left()) / rate; }

  /// Uniform integer in [0, n). Slight modulo bias is irrelevant for n << 2^64.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace meancurve
