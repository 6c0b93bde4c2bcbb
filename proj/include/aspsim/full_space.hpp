// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file full_space.hpp
 * @brief Direct full-CI operator factorized over alpha and beta strings.
 *
 * The amplitude vector is viewed as a matrix C[Ia, Ib] over alpha and beta
 * strings (row-major, so the index order equals the canonical determinant
 * order). H C is computed without storing H:
 *
 *   sigma = F_a C + C F_b^T + sum_{pq,rs} (pq|rs) E^a_pq C (E^b_rs)^T
 *
 * where F_a, F_b hold every same-spin term and the last sum carries the
 * opposite-spin interaction. Memory is linear in the number of determinants.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "aspsim/hamiltonian.hpp"

namespace aspsim {

/// Ascending fixed-popcount strings and their ranks.
class StringSpace {
 public:
  StringSpace(int n_orb, int n_elec);

  [[nodiscard]] std::size_t size() const noexcept { return strings_.size(); }
  [[nodiscard]] Bits operator[](std::size_t i) const { return strings_[i]; }
  [[nodiscard]] const std::vector<Bits>& strings() const noexcept { return strings_; }
  /// Position of s in the ascending list (combinatorial number system).
  [[nodiscard]] std::uint32_t rank(Bits s) const;

 private:
  int n_orb_;
  int n_elec_;
  std::vector<Bits> strings_;
};

class FullSpaceHamiltonian final : public HamiltonianOperator {
 public:
  explicit FullSpaceHamiltonian(const IntegralTable& table);

  [[nodiscard]] std::size_t dim() const override { return diag_.size(); }
  [[nodiscard]] const BasisPtr& basis() const override { return basis_; }
  [[nodiscard]] std::span<const double> diagonal() const override { return diag_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;

 private:
  struct Link {
    std::uint32_t from;
    std::uint32_t to;
    double sign;
  };
  struct Entry {
    std::uint32_t col;
    double value;
  };

  template <class T>
  void apply_impl(std::span<const T> x, std::span<T> y) const;

  int n_orb_;
  StringSpace alpha_;
  StringSpace beta_;
  BasisPtr basis_;
  std::vector<double> diag_;
  // Same-spin string Hamiltonians in row form (row = target string).
  std::vector<std::uint64_t> fa_ptr_, fb_ptr_;
  std::vector<Entry> fa_, fb_;
  // Alpha links grouped by target string: (source, pq index, sign).
  std::vector<std::uint64_t> ea_ptr_;
  std::vector<std::uint32_t> ea_from_;
  std::vector<std::uint32_t> ea_pq_;
  std::vector<double> ea_sign_;
  // Beta links grouped by rs index.
  std::vector<std::uint64_t> eb_ptr_;
  std::vector<Link> eb_;
  std::vector<double> v_;  ///< (pq|rs) as an n^2 x n^2 matrix
};

}  // namespace aspsim
