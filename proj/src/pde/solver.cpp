#include "meancurve/pde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "meancurve/core/errors.hpp"

namespace meancurve {

double PdeParams::stability_bound() const noexcept {
  return 1.0 / (4.0 * d * static_cast<double>(N) * N * phi_lip + K * f_lip);
}

void PdeParams::check_cfl() const {
  if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("PdeParams: safety must lie in (0, 1]");
  if (!(dt > 0.0)) throw CflViolation("time step must be positive");
  const double bound = safety * stability_bound();
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds safety * stability bound = " << bound;
    throw CflViolation(msg.str());
  }
}

PdeParams make_pde_params(const LatticeTorus& lattice, double K, const HydroTable& table, double safety) {
  PdeParams p;
  p.d = lattice.dim();
  p.N = lattice.side();
  p.K = K;
  p.safety = safety;
  p.phi_lip = table.phi_lip();
  p.f_lip = table.f_lip();
  p.dt = safety * p.stability_bound();
  return p;
}

std::vector<double> discrete_laplacian(const LatticeTorus& lattice, std::span<const double> p) {
  if (p.size() != lattice.size()) throw std::invalid_argument("discrete_laplacian: size mismatch");
  const double n2 = static_cast<double>(lattice.side()) * lattice.side();
  const double centre = 2.0 * lattice.dim();
  std::vector<double> out(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    double s = 0.0;
    for (auto y : lattice.neighbors(x)) s += p[y];
    out[x] = n2 * (s - centre * p[x]);
  }
  return out;
}

std::vector<double> discrete_laplacian_phi(const DensityField& field, const Hydrodynamics& hydro) {
  std::vector<double> p(field.u.size());
  for (std::size_t x = 0; x < p.size(); ++x) p[x] = hydro.phi(field.u[x]);
  return discrete_laplacian(field.lattice, p);
}

PdeStepper::PdeStepper(const LatticeTorus& lattice, const PdeParams& params, const HydroTable& table)
    : lattice_(lattice), params_(params), table_(&table), n2_(static_cast<double>(lattice.side()) * lattice.side()),
      phi_(std::max<std::size_t>(lattice.size(), 8 * static_cast<std::size_t>(lattice.side()))), f_(lattice.size()) {
  if (params.d != lattice.dim() || params.N != lattice.side())
    throw std::invalid_argument("PdeStepper: parameters do not match lattice");
  params_.check_cfl();
}

void PdeStepper::step(DensityField& field, double dt) {
  auto& u = field.u;
  const std::size_t n = u.size();
  const double centre = 2.0 * lattice_.dim();
  const double a = dt * n2_;
  const double b = dt * params_.K;
  if (lattice_.dim() == 2) {
    step_2d(u, a, b);
    field.t += dt;
    return;
  }
  for (std::size_t x = 0; x < n; ++x) table_->eval(u[x], phi_[x], f_[x]);
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (auto y : lattice_.neighbors(x)) s += phi_[y];
    u[x] += a * (s - centre * phi_[x]) + b * f_[x];
  }
  field.t += dt;
}

// Row-fused update: phi and f of the old field are kept for three rows at a
// time (plus the old first and last rows for the periodic wrap).
void PdeStepper::step_2d(std::vector<double>& u, double a, double b) {
  const std::size_t N = static_cast<std::size_t>(lattice_.side());
  double* buf = phi_.data();  // 8 rows of scratch: ring phi x3, ring f x2, first/last phi, last f
  double* ring_p[3] = {buf, buf + N, buf + 2 * N};
  double* ring_f[2] = {buf + 3 * N, buf + 4 * N};
  double* first_p = buf + 5 * N;
  double* last_p = buf + 6 * N;
  double* last_f = buf + 7 * N;
  double* first_f = f_.data();
  auto eval_row = [&](std::size_t i, double* p, double* f) {
    const double* ur = u.data() + i * N;
    for (std::size_t j = 0; j < N; ++j) table_->eval(ur[j], p[j], f[j]);
  };
  eval_row(N - 1, last_p, last_f);
  eval_row(0, first_p, first_f);
  const double* prev = last_p;
  const double* cur = first_p;
  const double* fc = first_f;
  for (std::size_t i = 0; i < N; ++i) {
    const double* next;
    const double* fn = nullptr;
    if (i + 2 < N) {
      eval_row(i + 1, ring_p[i % 3], ring_f[i % 2]);
      next = ring_p[i % 3];
      fn = ring_f[i % 2];
    } else if (i + 2 == N) {
      next = last_p;
      fn = last_f;
    } else {
      next = first_p;
    }
    double* ur = u.data() + i * N;
    ur[0] += a * (prev[0] + next[0] + cur[N - 1] + cur[1] - 4.0 * cur[0]) + b * fc[0];
    for (std::size_t j = 1; j + 1 < N; ++j)
      ur[j] += a * (prev[j] + next[j] + cur[j - 1] + cur[j + 1] - 4.0 * cur[j]) + b * fc[j];
    ur[N - 1] += a * (prev[N - 1] + next[N - 1] + cur[N - 2] + cur[0] - 4.0 * cur[N - 1]) + b * fc[N - 1];
    prev = cur;
    cur = next;
    fc = fn;
  }
}

DensityField step_euler(const DensityField& field, const PdeParams& params, const HydroTable& table) {
  PdeStepper stepper(field.lattice, params, table);
  DensityField out = field;
  stepper.step(out, params.dt);
  return out;
}

PdeTrajectory solve(const DensityField& u0, const PdeParams& params, const HydroTable& table, double t_end,
                    double snapshot_every, const StepObserver& observer) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("solve: t_end must be nonnegative");
  PdeStepper stepper(u0.lattice, params, table);
  PdeTrajectory traj;
  const std::uint64_t steps = t_end == 0.0 ? 0 : static_cast<std::uint64_t>(std::ceil(t_end / params.dt * (1.0 - 1e-14)));
  const double dt = steps == 0 ? params.dt : t_end / static_cast<double>(steps);
  // step indices nearest to the multiples of snapshot_every
  std::vector<std::uint64_t> marks;
  if (snapshot_every > 0.0)
    for (std::uint64_t j = 1; j * snapshot_every <= t_end * (1.0 + 1e-12); ++j)
      marks.push_back(std::min<std::uint64_t>(steps, static_cast<std::uint64_t>(std::llround(j * snapshot_every / dt))));
  std::size_t next_mark = 0;
  traj.dt = dt;
  traj.steps = steps;

  DensityField u = u0;
  const double t0 = u0.t;
  traj.snapshots.push_back(u);
  if (observer) observer(u, 0);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    stepper.step(u, dt);
    u.t = t0 + static_cast<double>(k) * dt;
    if (observer) observer(u, k);
    bool take = k == steps;
    while (next_mark < marks.size() && marks[next_mark] <= k) take |= marks[next_mark++] == k;
    if (take) traj.snapshots.push_back(u);
  }
  return traj;
}

ComparisonReport comparison_check(const DensityField& lower, const DensityField& upper, const PdeParams& params,
                                  const HydroTable& table, double t_end, double tie_tol) {
  if (!(lower.lattice == upper.lattice)) throw std::invalid_argument("comparison_check: lattice mismatch");
  PdeStepper stepper(lower.lattice, params, table);
  const std::uint64_t steps = t_end == 0.0 ? 0 : static_cast<std::uint64_t>(std::ceil(t_end / params.dt * (1.0 - 1e-14)));
  const double dt = steps == 0 ? params.dt : t_end / static_cast<double>(steps);

  ComparisonReport rep;
  DensityField lo = lower, hi = upper;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.max_value = -std::numeric_limits<double>::infinity();
  auto check = [&]() {
    for (std::size_t x = 0; x < lo.u.size(); ++x) {
      rep.min_value = std::min({rep.min_value, lo.u[x], hi.u[x]});
      rep.max_value = std::max({rep.max_value, lo.u[x], hi.u[x]});
      if (rep.ordered && lo.u[x] > hi.u[x] + tie_tol) {
        rep.ordered = false;
        rep.t = lo.t;
        rep.site = x;
        rep.lower = lo.u[x];
        rep.upper = hi.u[x];
      }
    }
    ++rep.steps_checked;
  };
  check();
  for (std::uint64_t k = 1; k <= steps; ++k) {
    stepper.step(lo, dt);
    stepper.step(hi, dt);
    check();
  }
  return rep;
}

double EnergyResidual::max_abs() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, std::abs(r));
  return m;
}

EnergyResidual energy_identity_residual(std::span<const DensityField> trajectory, double dt, double K,
                                        const Hydrodynamics& hydro) {
  EnergyResidual out;
  if (trajectory.size() < 2) return out;
  const auto& lat = trajectory.front().lattice;
  const double N = lat.side();
  const double w = 1.0 / static_cast<double>(lat.size());
  std::vector<double> p(lat.size());
  for (std::size_t n = 0; n + 1 < trajectory.size(); ++n) {
    const auto& u = trajectory[n].u;
    const auto& v = trajectory[n + 1].u;
    double e0 = 0.0, e1 = 0.0, react = 0.0, diss = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) {
      p[x] = hydro.phi(u[x]);
      e0 += u[x] * u[x];
      e1 += v[x] * v[x];
      react += u[x] * hydro.f(u[x]);
    }
    for (std::size_t x = 0; x < u.size(); ++x)
      for (int i = 0; i < lat.dim(); ++i) {
        const auto y = lat.neighbor(x, i, true);
        diss -= N * (u[y] - u[x]) * N * (p[y] - p[x]);
      }
    out.dissipation.push_back(w * diss);
    out.residual.push_back(w * (0.5 * (e1 - e0) / dt - diss - K * react));
  }
  return out;
}

DerivativeNorms derivative_diagnostics(const DensityField& field, const Hydrodynamics& hydro) {
  const auto& lat = field.lattice;
  const auto& u = field.u;
  const double N = lat.side();
  DerivativeNorms out;
  for (std::size_t x = 0; x < u.size(); ++x)
    for (int i = 0; i < lat.dim(); ++i) {
      const auto xi = lat.neighbor(x, i, true);
      out.grad = std::max(out.grad, std::abs(N * (u[xi] - u[x])));
      for (int j = 0; j < lat.dim(); ++j) {
        const auto xj = lat.neighbor(x, j, true);
        const auto xij = lat.neighbor(xi, j, true);
        out.hessian = std::max(out.hessian, std::abs(N * N * (u[xij] - u[xi] - u[xj] + u[x])));
      }
    }
  for (double v : discrete_laplacian_phi(field, hydro)) out.laplacian_phi = std::max(out.laplacian_phi, std::abs(v));
  return out;
}

}  // namespace meancurve
