#pragma once

#include <cstdint>
#include <vector>

#include "meancurve/core/errors.hpp"
#include "meancurve/core/random.hpp"
#include "meancurve/particle/configuration.hpp"
#include "meancurve/particle/fenwick.hpp"
#include "meancurve/rates/rate_model.hpp"

namespace meancurve {

struct SimParams {
  double K = 0.0;
  std::uint64_t seed = 0;
  double t_end = 0.0;
  /// Snapshot spacing; 0 records only t = 0 and t_end.
  double snapshot_every = 0.0;
  /// Abort after this many events; 0 means unlimited.
  std::uint64_t max_events = 0;

  void validate() const;
};

enum class EventKind : std::uint8_t { Jump, Create, Annihilate };

struct Event {
  EventKind kind;
  std::uint32_t site;    // source site for jumps
  std::uint32_t target;  // destination for jumps, equal to site otherwise
  double dt;
};

struct EventCounts {
  std::uint64_t jumps = 0;
  std::uint64_t creations = 0;
  std::uint64_t annihilations = 0;
  std::uint64_t total() const noexcept { return jumps + creations + annihilations; }
};

struct Trajectory {
  std::vector<Configuration> snapshots;
  EventCounts events;
};

class EventBudgetExceeded : public Error {
 public:
  EventBudgetExceeded(const std::string& what, Trajectory partial) : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

/// Total jump rate R(eta) = N^2 sum_x 2d g(eta_x) + K sum_x (c+_x + c-_x).
double total_rate(const Configuration& config, const RateModel& model, double K);

/// Exact event-driven simulation of the generator N^2 L_ZR + K L_G.
///
/// Per-site rates live in a Fenwick tree; an event touching site y refreshes y
/// and the sites whose Glauber window contains y.
class Simulator {
 public:
  Simulator(const RateModel& model, Configuration initial, double K, std::uint64_t seed);

  const Configuration& state() const noexcept { return config_; }
  const EventCounts& counts() const noexcept { return counts_; }
  double total_rate() const noexcept { return tree_.total(); }

  /// Advances by one event; throws DeadConfiguration when R = 0.
  Event step();

  /// Runs until state().time >= t_end, recording snapshots at multiples of
  /// `snapshot_every` (and at t_end). A snapshot at time s is the state in
  /// force at s. An absorbing configuration is carried to the horizon.
  Trajectory run(double t_end, double snapshot_every, std::uint64_t max_events = 0);

 private:
  void refresh(std::size_t x) noexcept;
  void refresh_around(std::size_t y) noexcept;
  void rebuild();
  double recompute_site(std::size_t x, double& jump, double& create, double& annihilate) const noexcept;
  void increment(std::size_t x);
  double ensure_rate();
  Event apply_event(double R, double dt);

  RateModel model_;
  Configuration config_;
  double K_;
  Rng rng_;
  double jump_scale_;
  std::array<Offset, 3> offsets_;
  std::vector<std::uint32_t> window_;          // 3 window sites per site
  std::vector<std::uint32_t> reverse_window_;  // x - e_k, 3 per site
  std::vector<double> jump_, create_, annihilate_;
  FenwickTree tree_;
  std::uint64_t updates_since_rebuild_ = 0;
  EventCounts counts_;
};

/// Convenience wrapper: Simulator(model, eta0, params.K, params.seed).run(...).
Trajectory run(const RateModel& model, const Configuration& eta0, const SimParams& params);

}  // namespace meancurve
