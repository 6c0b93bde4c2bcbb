// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file asci.hpp
 * @brief Adaptive sampling CI: iterative selection of the determinants that
 *        matter for one root, and the union space used for dynamics.
 */

#pragma once

#include <filesystem>
#include <vector>

#include "aspsim/eig.hpp"
#include "aspsim/hamiltonian.hpp"
#include "aspsim/integrals.hpp"

namespace aspsim {

struct AsciConfig {
  std::size_t target_size = 1000;  ///< determinants kept per iteration
  std::size_t core_size = 1000;    ///< top-|C| determinants expanded per iteration
  double e_tol = 1e-5;             ///< Hartree
  int root = 0;                    ///< 0 ground, 1 first excited
  int max_iterations = 50;
  EigOptions eig = [] { EigOptions o; o.tol = 1e-10; return o; }();

  /// Throws ConfigError.
  void validate() const;
};

struct SelectedSpace {
  int n_orb = 0;
  std::vector<Determinant> dets;  ///< canonical order, unique
  std::vector<double> coeffs;     ///< converged root in this space, unit norm
  double energy = 0.0;            ///< Hartree
  int iterations = 0;
  std::size_t skipped_denominators = 0;  ///< candidates with |H_ii - E| < 1e-12
  std::vector<double> history;    ///< root energy after each iteration (seed energy first)

  void save(const std::filesystem::path& path) const;
  [[nodiscard]] static SelectedSpace load(const std::filesystem::path& path);
};

/**
 * Seed determinants: the reference (lowest orbitals filled) for root 0;
 * for root 1 the reference plus the excited seed, the determinant with the
 * second-lowest diagonal among the reference and its singles and doubles
 * (canonical order breaks ties).
 */
[[nodiscard]] std::vector<Determinant> asci_seeds(const IntegralTable& table, int root);

/**
 * Each iteration expands the core_size largest-|C| determinants into their
 * singles and doubles, scores new candidates with
 *
 *   C_i = -sum_j H_ij C_j / (H_ii - E)
 *
 * (determinants already in the space keep their diagonalized C), keeps the
 * target_size largest |score| plus the seeds, and diagonalizes. Stops once
 * the root energy moves by less than e_tol.
 *
 * Throws ConvergenceError with the energy history after max_iterations.
 */
[[nodiscard]] SelectedSpace asci_select(const IntegralTable& table, const AsciConfig& config);

/// Sorted union of the ground and excited selections. A config with
/// target_size 0 is skipped.
[[nodiscard]] std::vector<Determinant> dynamics_space(const IntegralTable& table,
                                                      const AsciConfig& ground,
                                                      const AsciConfig& excited);

}  // namespace aspsim
