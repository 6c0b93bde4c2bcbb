// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Slater-Condon matrix elements and Hamiltonian operators over an
 *        ordered determinant list.
 *
 * All operators share one interface so eigensolvers and propagators need not
 * care whether the matrix is stored, regenerated on the fly, or factorized
 * over alpha/beta strings.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "aspsim/determinant.hpp"
#include "aspsim/integrals.hpp"

namespace aspsim {

using cplx = std::complex<double>;
using Basis = std::vector<Determinant>;
using BasisPtr = std::shared_ptr<const Basis>;

/// Stored values with smaller magnitude are dropped.
inline constexpr double kDropTolerance = 1e-14;

/// <d1|H|d2> by the Slater-Condon rules; zero beyond doubles.
/// Throws UsageError when the determinants are in different sectors.
[[nodiscard]] double matrix_element(const Determinant& d1, const Determinant& d2,
                                    const IntegralTable& table);

/// <d|H|d>, including the core energy.
[[nodiscard]] double diagonal_element(const Determinant& d, const IntegralTable& table);

/**
 * Enumerates every single and double excitation of `d` together with its
 * matrix element <d'|H|d>, skipping elements below `drop` in magnitude.
 * Calls f(const Determinant& connected, double value).
 */
template <class F>
void for_each_connection(const Determinant& d, const IntegralTable& t, double drop, F&& f);

/// Polymorphic real-symmetric operator on amplitude vectors.
class HamiltonianOperator {
 public:
  virtual ~HamiltonianOperator() = default;

  [[nodiscard]] virtual std::size_t dim() const = 0;
  [[nodiscard]] virtual const BasisPtr& basis() const = 0;
  [[nodiscard]] virtual std::span<const double> diagonal() const = 0;

  /// y = H x. Sizes must equal dim(); throws UsageError otherwise.
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  virtual void apply(std::span<const cplx> x, std::span<cplx> y) const = 0;

  template <class T>
  [[nodiscard]] std::vector<T> operator()(std::span<const T> x) const {
    std::vector<T> y(x.size());
    apply(x, std::span<T>(y));
    return y;
  }
};

/// Diagonal-only operator.
class DiagonalOperator final : public HamiltonianOperator {
 public:
  DiagonalOperator(BasisPtr basis, std::vector<double> diag);

  [[nodiscard]] std::size_t dim() const override { return diag_.size(); }
  [[nodiscard]] const BasisPtr& basis() const override { return basis_; }
  [[nodiscard]] std::span<const double> diagonal() const override { return diag_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;

 private:
  BasisPtr basis_;
  std::vector<double> diag_;
};

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

/**
 * Stored symmetric matrix. Off-diagonal entries live in compressed-column
 * form (both triangles, rows ascending within each column); the diagonal is
 * kept densely.
 */
class SparseHamiltonian;
[[nodiscard]] SparseHamiltonian assemble(BasisPtr dets, const IntegralTable& table);

class SparseHamiltonian final : public HamiltonianOperator {
 public:
  SparseHamiltonian() = default;
  /// From the diagonal and strictly-upper triplets (row < col). Entries with
  /// |value| < kDropTolerance are discarded; duplicates throw UsageError.
  SparseHamiltonian(BasisPtr basis, std::vector<double> diag, std::vector<Triplet> upper);

  [[nodiscard]] std::size_t dim() const override { return diag_.size(); }
  [[nodiscard]] const BasisPtr& basis() const override { return basis_; }
  [[nodiscard]] std::span<const double> diagonal() const override { return diag_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;

  /// Stored off-diagonal entries, counting both triangles.
  [[nodiscard]] std::size_t nnz_offdiag() const noexcept { return values_.size(); }
  /// H_ij (zero when not stored).
  [[nodiscard]] double value(std::size_t i, std::size_t j) const;
  /// Strictly-upper entries in column-major order.
  [[nodiscard]] std::vector<Triplet> upper_triplets() const;

  [[nodiscard]] std::span<const std::uint64_t> col_ptr() const { return col_ptr_; }
  [[nodiscard]] std::span<const std::uint32_t> row_index() const { return row_idx_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

 private:
  friend SparseHamiltonian assemble(BasisPtr dets, const IntegralTable& table);
  SparseHamiltonian(BasisPtr basis, std::vector<double> diag, std::vector<std::uint64_t> col_ptr,
                    std::vector<std::uint32_t> row_idx, std::vector<double> values)
      : basis_(std::move(basis)),
        diag_(std::move(diag)),
        col_ptr_(std::move(col_ptr)),
        row_idx_(std::move(row_idx)),
        values_(std::move(values)) {}

  template <class T>
  void apply_impl(std::span<const T> x, std::span<T> y) const;

  BasisPtr basis_;
  std::vector<double> diag_;
  std::vector<std::uint64_t> col_ptr_;
  std::vector<std::uint32_t> row_idx_;
  std::vector<double> values_;
};

/// Hash index from determinant to its position in a basis.
class BasisIndex {
 public:
  explicit BasisIndex(const Basis& basis);
  /// Position of d, or -1.
  [[nodiscard]] std::int64_t find(const Determinant& d) const {
    const auto it = map_.find(d);
    return it == map_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }
  [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }

 private:
  std::unordered_map<Determinant, std::uint32_t, DeterminantHash> map_;
};

/// Checks a determinant list is nonempty, duplicate-free, in one particle
/// sector and within the table's orbitals. Throws UsageError otherwise.
void check_basis(const Basis& dets, const IntegralTable& table);

/**
 * Builds the stored Hamiltonian over `dets`: every nonzero element between
 * listed determinants connected by at most a double excitation. Rows are
 * processed independently; the result does not depend on the thread count.
 */
[[nodiscard]] SparseHamiltonian assemble(BasisPtr dets, const IntegralTable& table);

/// Regenerates connections on every application instead of storing them.
class MatrixFreeHamiltonian final : public HamiltonianOperator {
 public:
  MatrixFreeHamiltonian(BasisPtr dets, IntegralTable table);

  [[nodiscard]] std::size_t dim() const override { return diag_.size(); }
  [[nodiscard]] const BasisPtr& basis() const override { return basis_; }
  [[nodiscard]] std::span<const double> diagonal() const override { return diag_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;

 private:
  template <class T>
  void apply_impl(std::span<const T> x, std::span<T> y) const;

  BasisPtr basis_;
  IntegralTable table_;
  BasisIndex index_;
  std::vector<double> diag_;
};

/// (1 - f) H_init + f H_target on a shared basis.
class InterpolatedPair {
 public:
  /// Throws UsageError unless both operators act on the same determinant list.
  InterpolatedPair(std::shared_ptr<const HamiltonianOperator> init,
                   std::shared_ptr<const HamiltonianOperator> target);

  [[nodiscard]] const HamiltonianOperator& init() const { return *init_; }
  [[nodiscard]] const HamiltonianOperator& target() const { return *target_; }
  [[nodiscard]] std::shared_ptr<const HamiltonianOperator> init_ptr() const { return init_; }
  [[nodiscard]] std::shared_ptr<const HamiltonianOperator> target_ptr() const { return target_; }
  [[nodiscard]] std::size_t dim() const { return target_->dim(); }
  [[nodiscard]] const BasisPtr& basis() const { return target_->basis(); }

  /// y = (1 - f) H_init x + f H_target x; f = 0 and f = 1 use one operand only.
  template <class T>
  void apply(double f, std::span<const T> x, std::span<T> y) const;

 private:
  std::shared_ptr<const HamiltonianOperator> init_;
  std::shared_ptr<const HamiltonianOperator> target_;
};

/// Operator view of an InterpolatedPair frozen at one mixing fraction.
class InterpolatedOperator final : public HamiltonianOperator {
 public:
  InterpolatedOperator(const InterpolatedPair& pair, double f);

  [[nodiscard]] std::size_t dim() const override { return pair_->dim(); }
  [[nodiscard]] const BasisPtr& basis() const override { return pair_->basis(); }
  [[nodiscard]] std::span<const double> diagonal() const override { return diag_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  [[nodiscard]] double fraction() const noexcept { return f_; }

 private:
  const InterpolatedPair* pair_;
  double f_;
  std::vector<double> diag_;
};

/// Writes a versioned binary image (dims, nnz, determinants, diagonal, upper triplets).
void save_hamiltonian(const std::filesystem::path& path, const SparseHamiltonian& h, int n_orb);
/// Reads a file written by save_hamiltonian; throws ParseError on a bad image.
[[nodiscard]] SparseHamiltonian load_hamiltonian(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

template <class F>
void for_each_connection(const Determinant& d, const IntegralTable& t, double drop, F&& f) {
  const int n = t.n_orb();
  const Bits full = low_mask(n);

  auto single = [&](Bits occ_same, Bits occ_other, int m, int p) {
    double v = t.h(m, p);
    for_each_bit(occ_same, [&](int k) { v += t.v(m, p, k, k) - t.v(m, k, k, p); });
    for_each_bit(occ_other, [&](int k) { v += t.v(m, p, k, k); });
    return v * single_phase(occ_same, m, p);
  };

  auto same_spin = [&](Bits occ, Bits other, bool is_alpha) {
    const Bits virt = full & ~occ;
    for_each_bit(occ, [&](int m) {
      for_each_bit(virt, [&](int p) {
        const double v = single(occ, other, m, p);
        if (std::abs(v) < drop) return;
        const Bits s = occ ^ (Bits{1} << m) ^ (Bits{1} << p);
        f(is_alpha ? Determinant{s, d.beta} : Determinant{d.alpha, s}, v);
      });
    });
    for_each_bit(occ, [&](int m) {
      for_each_bit(occ & ~low_mask(m + 1), [&](int k) {
        for_each_bit(virt, [&](int p) {
          const Bits mid = occ ^ (Bits{1} << m) ^ (Bits{1} << p);
          const int ph1 = single_phase(occ, m, p);
          for_each_bit(virt & ~low_mask(p + 1), [&](int q) {
            const double raw = t.v(m, p, k, q) - t.v(m, q, k, p);
            if (std::abs(raw) < drop) return;
            const int ph = ph1 * single_phase(mid, k, q);
            const Bits s = mid ^ (Bits{1} << k) ^ (Bits{1} << q);
            f(is_alpha ? Determinant{s, d.beta} : Determinant{d.alpha, s}, ph * raw);
          });
        });
      });
    });
  };
  same_spin(d.alpha, d.beta, true);
  same_spin(d.beta, d.alpha, false);

  const Bits va = full & ~d.alpha;
  const Bits vb = full & ~d.beta;
  for_each_bit(d.alpha, [&](int m) {
    for_each_bit(va, [&](int p) {
      const Bits a = d.alpha ^ (Bits{1} << m) ^ (Bits{1} << p);
      const int pha = single_phase(d.alpha, m, p);
      for_each_bit(d.beta, [&](int k) {
        for_each_bit(vb, [&](int q) {
          const double raw = t.v(m, p, k, q);
          if (std::abs(raw) < drop) return;
          const int ph = pha * single_phase(d.beta, k, q);
          f(Determinant{a, d.beta ^ (Bits{1} << k) ^ (Bits{1} << q)}, ph * raw);
        });
      });
    });
  });
}

template <class T>
void InterpolatedPair::apply(double f, std::span<const T> x, std::span<T> y) const {
  if (f == 0.0) {
    init_->apply(x, y);
    return;
  }
  if (f == 1.0) {
    target_->apply(x, y);
    return;
  }
  std::vector<T> tmp(x.size());
  init_->apply(x, std::span<T>(tmp));
  target_->apply(x, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (1.0 - f) * tmp[i] + f * y[i];
}

}  // namespace aspsim
