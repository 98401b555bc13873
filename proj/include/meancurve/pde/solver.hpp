#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "meancurve/pde/field.hpp"
#include "meancurve/pde/hydro_table.hpp"

namespace meancurve {

struct PdeParams {
  int d = 2;
  int N = 32;
  double K = 1.0;
  /// Time step; 0 means "derive from the stability bound".
  double dt = 0.0;
  double safety = 0.25;
  double phi_lip = 0.0;
  double f_lip = 0.0;

  /// 1 / (4 d N^2 phi_lip + K f_lip).
  double stability_bound() const noexcept;
  /// Throws CflViolation when dt > safety * stability_bound().
  void check_cfl() const;
};

/// Parameters for `lattice`, with Lipschitz constants read from `table` and
/// dt = safety * stability_bound().
PdeParams make_pde_params(const LatticeTorus& lattice, double K, const HydroTable& table, double safety = 0.25);

/// sum_i N^2 (p(x + e_i) + p(x - e_i) - 2 p(x)) for a field of values p.
std::vector<double> discrete_laplacian(const LatticeTorus& lattice, std::span<const double> p);

/// discrete_laplacian applied to phi(u).
std::vector<double> discrete_laplacian_phi(const DensityField& field, const Hydrodynamics& hydro);

/// One explicit Euler step u + dt (Laplacian phi(u) + K f(u)).
DensityField step_euler(const DensityField& field, const PdeParams& params, const HydroTable& table);

struct PdeTrajectory {
  std::vector<DensityField> snapshots;
  double dt = 0.0;
  std::uint64_t steps = 0;
};

/// Called after every step (and once at t = 0 with step 0).
using StepObserver = std::function<void(const DensityField&, std::uint64_t step)>;

/// Integrates to exactly t_end with a uniform step dt' = t_end / ceil(t_end / dt) <= dt.
/// Snapshots at the steps nearest to multiples of snapshot_every, plus the
/// start and the end (0: only start and end).
PdeTrajectory solve(const DensityField& u0, const PdeParams& params, const HydroTable& table, double t_end,
                    double snapshot_every = 0.0, const StepObserver& observer = {});

/// Reusable stepping kernel with preallocated buffers.
class PdeStepper {
 public:
  PdeStepper(const LatticeTorus& lattice, const PdeParams& params, const HydroTable& table);
  void step(DensityField& field, double dt);
  double dt() const noexcept { return params_.dt; }

 private:
  void step_2d(std::vector<double>& u, double a, double b);

  LatticeTorus lattice_;
  PdeParams params_;
  const HydroTable* table_;
  double n2_;
  std::vector<double> phi_, f_;
};

struct ComparisonReport {
  bool ordered = true;
  std::uint64_t steps_checked = 0;
  /// First violation, if any.
  double t = 0.0;
  std::size_t site = 0;
  double lower = 0.0;
  double upper = 0.0;
  /// Range of both solutions over the whole run.
  double min_value = 0.0;
  double max_value = 0.0;
};

/// Evolves both fields with the same step and checks lower <= upper + tie_tol
/// at every step.
ComparisonReport comparison_check(const DensityField& lower, const DensityField& upper, const PdeParams& params,
                                  const HydroTable& table, double t_end, double tie_tol = 1e-12);

struct EnergyResidual {
  /// (1/2)(|u_{n+1}|^2 - |u_n|^2)/dt minus the right-hand side at u_n, per step.
  std::vector<double> residual;
  /// -sum_{i,x} grad_i u grad_i phi(u) at u_n, per step.
  std::vector<double> dissipation;
  double max_abs() const;
};

/// Residual of (1/2) d/dt sum u^2 = -sum grad u . grad phi(u) + K sum u f(u)
/// over consecutive fields spaced by dt. Sums carry the weight N^{-d}.
EnergyResidual energy_identity_residual(std::span<const DensityField> trajectory, double dt, double K,
                                        const Hydrodynamics& hydro);

struct DerivativeNorms {
  double grad = 0.0;
  double hessian = 0.0;
  double laplacian_phi = 0.0;
};

/// Sup norms of the forward differences grad_i u, grad_i grad_j u and of Laplacian phi(u).
DerivativeNorms derivative_diagnostics(const DensityField& field, const Hydrodynamics& hydro);

}  // namespace meancurve
