// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file eig.hpp
 * @brief Lowest eigenpairs of a real symmetric operator by restarted Lanczos.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "aspsim/hamiltonian.hpp"

namespace aspsim {

struct EigenPair {
  double value = 0.0;           ///< Hartree
  std::vector<double> vector;   ///< unit norm, largest component positive
  double residual = 0.0;        ///< ||H v - value v||
};

struct EigOptions {
  double tol = 1e-12;           ///< eigenvalue change between iterations (Hartree)
  /// Cap on operator applications; 0 means 10 * dim.
  std::int64_t max_matvecs = 0;
  int subspace = 40;            ///< basis size that triggers a thick restart
  /// Starting vectors. Empty: the unit vector on the lowest diagonal entry.
  std::vector<std::vector<double>> seeds;
  /// Adds one pseudo-random vector to the starting block so that every
  /// symmetry sector and every copy of a degenerate level is reachable.
  bool random_start = true;
  std::uint64_t rng_seed = 0x5eed;
  /// Expands with the diagonally preconditioned residual (Davidson)
  /// instead of the bare residual.
  bool precondition = true;
  /// Dimensions up to this size are diagonalized densely.
  std::size_t dense_limit = 200;
};

/**
 * The k lowest eigenpairs of `op`, ascending. Convergence requires, for
 * every returned root, an eigenvalue change below tol and a residual norm
 * at most 10 * tol. Degenerate levels come back as separate orthogonal
 * vectors.
 *
 * Throws UsageError when k is outside [1, dim] and ConvergenceError (with
 * the residual history of the slowest root) when the matvec cap is hit.
 */
[[nodiscard]] std::vector<EigenPair> lowest_eigenpairs(const HamiltonianOperator& op, int k,
                                                       const EigOptions& options = {});

}  // namespace aspsim
