// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file propagate.hpp
 * @brief Krylov time stepping of the interpolated Hamiltonian and the
 *        per-step evolution trace.
 *
 * Atomic units throughout: hbar = 1, energies in Hartree, times in hbar/Hartree.
 */

#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "aspsim/eig.hpp"
#include "aspsim/hamiltonian.hpp"
#include "aspsim/schedule.hpp"

namespace aspsim {

struct PropagationConfig {
  double dt = 0.1;           ///< time step (a.u.)
  double krylov_tol = 1e-12; ///< threshold on the newest basis vector's coefficient
  int krylov_max = 100;      ///< Krylov dimension cap

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

struct KrylovResult {
  std::vector<cplx> state;
  int dimension = 0;
  /// Norm of the propagated vector before renormalization.
  double norm = 1.0;
  /// False when krylov_max was reached with the last coefficient above tolerance.
  bool converged = true;
  double last_coefficient = 0.0;
};

/**
 * exp(-i H dt) v by Lanczos: after each new basis vector the tridiagonal
 * projection is diagonalized and the first column of its exponential gives
 * the expansion coefficients. Stops when the newest coefficient drops below
 * krylov_tol, on breakdown (exact in the current subspace), or at krylov_max.
 * The state is renormalized unless `renormalize` is false.
 */
[[nodiscard]] KrylovResult krylov_step(const HamiltonianOperator& h, std::span<const cplx> v,
                                       double dt, const PropagationConfig& config,
                                       bool renormalize = true);

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// One row per completed time step (quantities at the step's end time).
struct TraceRow {
  int step = 0;          ///< 1-based; 0 for the initial state
  double t = 0.0;        ///< a.u.
  double s = 0.0;        ///< t / T
  double f = 0.0;        ///< schedule value at s
  double norm = 1.0;     ///< norm before renormalization
  double overlap_target = kMissing;  ///< |<psi|psi_target>|^2
  double energy_expect = kMissing;   ///< <psi|H_target|psi> (Hartree)
  int krylov_dim = 0;
  bool krylov_converged = true;
  // Strided spectral entries; NaN when not computed at this step.
  double e0 = kMissing;
  double e1 = kMissing;
  double gap = kMissing;
  double overlap_instant = kMissing;      ///< |<psi|lambda_0(s)>|^2
  double adiabatic_numerator = kMissing;  ///< |<lambda_1|(H_target - H_init)|lambda_0>|
  bool eig_failed = false;
};

struct EvolutionTrace {
  double total_time = 0.0;
  double dt = 0.0;
  TraceRow initial;
  std::vector<TraceRow> rows;
  std::vector<std::string> warnings;

  [[nodiscard]] const TraceRow& final_row() const { return rows.empty() ? initial : rows.back(); }
  [[nodiscard]] int max_krylov_dim() const;

  void write_csv(std::ostream& out) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct TraceOptions {
  /// Spectral entries every this many steps (and at the last step); 0 disables.
  int eigen_stride = 0;
  bool adiabatic_numerator = false;
  /// <psi|H_target|psi> at every step; otherwise only at the final step.
  bool energy_every_step = true;
  EigOptions eig;
};

/// Called after every step with the new row and state.
using StepObserver = std::function<void(const TraceRow&, std::span<const cplx>)>;

struct EvolutionResult {
  std::vector<cplx> state;
  EvolutionTrace trace;
};

/**
 * Evolves psi0 for total time T with ceil(T / dt) steps. Step k holds the
 * Hamiltonian at s_k = t_k / T (left endpoint); the final step covers the
 * remainder. `target` (optional, real, unit norm) is the state for
 * overlap_target. Eigensolver failures at a strided step are recorded in
 * the row and the warnings instead of aborting.
 */
[[nodiscard]] EvolutionResult evolve(const InterpolatedPair& pair, std::span<const cplx> psi0,
                                     const Schedule& schedule, double total_time,
                                     const PropagationConfig& config, const TraceOptions& options = {},
                                     std::span<const double> target = {},
                                     const StepObserver& observer = {});

/// |<a|b>|^2 for complex a and real b.
[[nodiscard]] double squared_overlap(std::span<const cplx> a, std::span<const double> b);
/// Real vector promoted to complex amplitudes.
[[nodiscard]] std::vector<cplx> to_complex(std::span<const double> v);

}  // namespace aspsim
