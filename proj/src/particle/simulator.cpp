#include "meancurve/particle/simulator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace meancurve {
namespace {

constexpr std::uint64_t kRebuildPeriod = 1u << 16;

}  // namespace

void SimParams::validate() const {
  if (!(K >= 0.0)) throw std::invalid_argument("SimParams: K must be nonnegative");
  if (!(t_end >= 0.0)) throw std::invalid_argument("SimParams: t_end must be nonnegative");
  if (!(snapshot_every >= 0.0)) throw std::invalid_argument("SimParams: snapshot_every must be nonnegative");
}

double total_rate(const Configuration& config, const RateModel& model, double K) {
  const auto& lat = config.lattice;
  const auto& g = model.jump_rate();
  const auto e = model.offsets(lat.dim());
  const double n2 = static_cast<double>(lat.side()) * lat.side();
  double zr = 0.0, glauber = 0.0;
  for (std::size_t x = 0; x < lat.size(); ++x) {
    zr += 2 * lat.dim() * g(config.eta[x]);
    if (K > 0.0) {
      const auto a = config.eta[x], b = config.eta[lat.shift(x, e[0])], c = config.eta[lat.shift(x, e[1])],
                 d = config.eta[lat.shift(x, e[2])];
      glauber += model.creation_rate(a, b, c, d) + model.annihilation_rate(a, b, c, d);
    }
  }
  return n2 * zr + K * glauber;
}

Simulator::Simulator(const RateModel& model, Configuration initial, double K, std::uint64_t seed)
    : model_(model), config_(std::move(initial)), K_(K), rng_(seed) {
  if (!(K >= 0.0)) throw std::invalid_argument("Simulator: K must be nonnegative");
  const auto& lat = config_.lattice;
  const std::size_t n = lat.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("Simulator: lattice too large");
  jump_scale_ = 2.0 * lat.dim() * static_cast<double>(lat.side()) * lat.side();
  offsets_ = model_.offsets(lat.dim());
  window_.resize(3 * n);
  reverse_window_.resize(3 * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (int k = 0; k < 3; ++k) {
      window_[3 * x + k] = static_cast<std::uint32_t>(lat.shift(x, offsets_[k]));
      const Offset back{-offsets_[k][0], -offsets_[k][1], -offsets_[k][2]};
      reverse_window_[3 * x + k] = static_cast<std::uint32_t>(lat.shift(x, back));
    }
  }
  jump_.assign(n, 0.0);
  create_.assign(n, 0.0);
  annihilate_.assign(n, 0.0);
  tree_ = FenwickTree(n);
  rebuild();
}

double Simulator::recompute_site(std::size_t x, double& jump, double& create, double& annihilate) const noexcept {
  const auto& eta = config_.eta;
  const std::int64_t a = eta[x];
  jump = jump_scale_ * model_.jump_rate()(a);
  if (K_ > 0.0) {
    const std::uint32_t* w = &window_[3 * x];
    create = K_ * model_.creation_rate(a, eta[w[0]], eta[w[1]], eta[w[2]]);
    annihilate = K_ * model_.annihilation_rate(a, eta[w[0]], eta[w[1]], eta[w[2]]);
  } else {
    create = annihilate = 0.0;
  }
  return jump + create + annihilate;
}

void Simulator::refresh(std::size_t x) noexcept {
  tree_.set(x, recompute_site(x, jump_[x], create_[x], annihilate_[x]));
}

void Simulator::refresh_around(std::size_t y) noexcept {
  refresh(y);
  if (K_ > 0.0)
    for (int k = 0; k < 3; ++k) refresh(reverse_window_[3 * y + k]);
}

void Simulator::rebuild() {
  for (std::size_t x = 0; x < config_.eta.size(); ++x) {
    const double total = recompute_site(x, jump_[x], create_[x], annihilate_[x]);
    tree_.set(x, total);
  }
  tree_.rebuild();
  updates_since_rebuild_ = 0;
}

void Simulator::increment(std::size_t x) {
  if (config_.eta[x] == std::numeric_limits<std::int32_t>::max()) {
    std::ostringstream msg;
    msg << "occupation at site " << x << " would exceed 2^31 - 1";
    throw OccupancyOverflow(msg.str());
  }
  ++config_.eta[x];
}

double Simulator::ensure_rate() {
  double R = tree_.total();
  if (!(R > 0.0)) {
    rebuild();
    R = tree_.total();
  }
  return R;
}

Event Simulator::step() {
  const double R = ensure_rate();
  if (!(R > 0.0)) throw DeadConfiguration("total rate is zero: the configuration is absorbing");
  return apply_event(R, rng_.exponential(R));
}

Event Simulator::apply_event(double R, double dt) {
  std::size_t x = 0;
  double rem = 0.0;
  for (int attempt = 0;; ++attempt) {
    x = tree_.find(rng_.uniform() * R, rem);
    if (x < tree_.size() && tree_.value(x) > 0.0) break;
    // Rounding in the partial sums can land on an empty slot; resync and redraw.
    if (attempt > 3) throw std::logic_error("Simulator: event selection failed after rebuild");
    rebuild();
    R = tree_.total();
  }

  Event ev{EventKind::Jump, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(x), dt};
  if (rem < jump_[x] || (create_[x] == 0.0 && annihilate_[x] == 0.0)) {
    const auto nbrs = config_.lattice.neighbors(x);
    const std::size_t y = nbrs[rng_.below(nbrs.size())];
    increment(y);
    --config_.eta[x];
    ev.target = static_cast<std::uint32_t>(y);
    refresh_around(x);
    refresh_around(y);
    ++counts_.jumps;
  } else if (rem - jump_[x] < create_[x] || annihilate_[x] == 0.0) {
    ev.kind = EventKind::Create;
    increment(x);
    ++config_.total;
    refresh_around(x);
    ++counts_.creations;
  } else {
    ev.kind = EventKind::Annihilate;
    --config_.eta[x];
    --config_.total;
    refresh_around(x);
    ++counts_.annihilations;
  }
  config_.time += dt;
  if (++updates_since_rebuild_ >= kRebuildPeriod) rebuild();
  return ev;
}

Trajectory Simulator::run(double t_end, double snapshot_every, std::uint64_t max_events) {
  if (!(t_end >= 0.0) || !(snapshot_every >= 0.0)) throw std::invalid_argument("Simulator::run: invalid horizon");
  const double t0 = config_.time;
  const double horizon = t0 + t_end;
  std::vector<double> times;
  if (snapshot_every > 0.0) {
    for (std::uint64_t k = 0;; ++k) {
      const double s = t0 + static_cast<double>(k) * snapshot_every;
      if (s > horizon + 1e-12 * std::max(1.0, std::abs(horizon))) break;
      times.push_back(std::min(s, horizon));
    }
  } else {
    times.push_back(t0);
  }
  if (times.back() < horizon) times.push_back(horizon);

  Trajectory traj;
  std::size_t next = 0;
  // Records every pending snapshot time strictly before `until` with the current state.
  auto record_until = [&](double until) {
    while (next < times.size() && times[next] < until) {
      traj.snapshots.push_back(config_);
      traj.snapshots.back().time = times[next++];
    }
  };
  traj.snapshots.push_back(config_);
  ++next;
  const std::uint64_t start = counts_.total();
  while (next < times.size()) {
    const double R = ensure_rate();
    if (!(R > 0.0)) {
      record_until(std::numeric_limits<double>::infinity());
      break;
    }
    const double dt = rng_.exponential(R);
    record_until(config_.time + dt);
    if (next == times.size()) break;
    if (max_events != 0 && counts_.total() - start >= max_events) {
      traj.events = counts_;
      std::ostringstream msg;
      msg << "event budget of " << max_events << " exhausted at t = " << config_.time;
      throw EventBudgetExceeded(msg.str(), std::move(traj));
    }
    apply_event(R, dt);
  }
  traj.events = counts_;
  return traj;
}

Trajectory run(const RateModel& model, const Configuration& eta0, const SimParams& params) {
  params.validate();
  Simulator sim(model, eta0, params.K, params.seed);
  return sim.run(params.t_end, params.snapshot_every, params.max_events);
}

}  // namespace meancurve
