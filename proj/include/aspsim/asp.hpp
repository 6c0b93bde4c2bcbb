// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file asp.hpp
 * @brief Adiabatic state preparation experiments: initial Hamiltonians and
 *        the critical-time search.
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aspsim/propagate.hpp"
#include "aspsim/schedule.hpp"

namespace aspsim {

struct InitialHamiltonianSpec {
  enum class Kind { diagonal, casci_block };
  Kind kind = Kind::diagonal;
  std::vector<int> active_orbitals;  ///< casci_block only
};

[[nodiscard]] std::string to_string(InitialHamiltonianSpec::Kind kind);
/// "diagonal" or "casci_block"; throws ConfigError otherwise.
[[nodiscard]] InitialHamiltonianSpec::Kind parse_initial_kind(const std::string& name);

/**
 * Initial Hamiltonian on the target's determinant list. `diagonal` keeps
 * only the target diagonal. `casci_block` also keeps every off-diagonal
 * element between determinants whose electrons all sit in the active
 * orbitals, i.e. whose excitations relative to `reference` stay inside the
 * active set; it needs a stored target.
 *
 * Throws UsageError when the active set misses an orbital occupied in
 * `reference`, or when casci_block is requested for an operator that is not
 * a SparseHamiltonian.
 */
[[nodiscard]] SparseHamiltonian make_initial(const HamiltonianOperator& target,
                                             const InitialHamiltonianSpec& spec,
                                             const Determinant& reference);

/// Ground state of `h` (and energy) used as the preparation target.
struct TargetState {
  double energy = 0.0;
  std::vector<double> vector;
};

enum class Criterion { overlap, energy };
[[nodiscard]] std::string to_string(Criterion c);
[[nodiscard]] Criterion parse_criterion(const std::string& name);

struct CriticalTimeConfig {
  Criterion criterion = Criterion::overlap;
  double overlap_threshold = 0.99;
  double energy_threshold = 1.6e-3;  ///< Hartree above the target energy
  double t_cap = 200.0;              ///< a.u.; give up beyond this
  PropagationConfig propagation;
  /// Gap trace for the final run at t_critical; eigen_stride 0 skips it.
  TraceOptions final_trace = [] {
    TraceOptions o;
    o.eigen_stride = 1;
    o.eig.tol = 1e-8;  // gaps are reported to 1e-6 Hartree at best
    return o;
  }();

  void validate() const;
};

struct CriticalTimeResult {
  double t_critical = 0.0;   ///< a.u., on the two-significant-figure grid
  Criterion criterion = Criterion::overlap;
  double value = 0.0;        ///< criterion quantity at t_critical
  double initial_overlap = 0.0;
  double min_gap = kMissing; ///< Hartree, from the final run's gap trace
  double min_gap_s = kMissing;
  /// Every evaluated (T, criterion value), in evaluation order.
  std::vector<std::pair<double, double>> evaluations;
  /// Trace at t_critical and at the largest failing grid value below it.
  EvolutionTrace passing;
  EvolutionTrace failing;
  EvolutionTrace final_trace;  ///< run at t_critical with spectral entries

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Smallest value on the two-significant-figure grid strictly above x > 0.
[[nodiscard]] double grid_next(double x);
/// Smallest value on the grid that is >= x.
[[nodiscard]] double grid_ceil(double x);

/**
 * Smallest total time T (two significant figures) whose evolution from psi0
 * satisfies the criterion. T starts at dt and doubles until the criterion
 * holds, then bisects over the grid between the last failure and the first
 * success (ties go to the smaller T). Throws CriterionUnreachable carrying
 * the best value seen when T would exceed t_cap.
 */
[[nodiscard]] CriticalTimeResult critical_time(const InterpolatedPair& pair,
                                               std::span<const cplx> psi0,
                                               const Schedule& schedule,
                                               const TargetState& target,
                                               const CriticalTimeConfig& config);

}  // namespace aspsim
