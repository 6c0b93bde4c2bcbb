// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/hamiltonian.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

double diagonal_element(const Determinant& d, const IntegralTable& t) {
  double e = t.e_core();
  auto same = [&](Bits occ) {
    for_each_bit(occ, [&](int i) {
      e += t.h(i, i);
      for_each_bit(occ & low_mask(i), [&](int j) { e += t.v(i, i, j, j) - t.v(i, j, j, i); });
    });
  };
  same(d.alpha);
  same(d.beta);
  for_each_bit(d.alpha, [&](int i) { for_each_bit(d.beta, [&](int j) { e += t.v(i, i, j, j); }); });
  return e;
}

double matrix_element(const Determinant& d1, const Determinant& d2, const IntegralTable& t) {
  const ExcitationInfo ex = excitation_info(d1, d2);
  switch (ex.degree) {
    case 0:
      return diagonal_element(d1, t);
    case 1: {
      const bool alpha = ex.alpha.count == 1;
      const int m = alpha ? ex.alpha.holes[0] : ex.beta.holes[0];
      const int p = alpha ? ex.alpha.particles[0] : ex.beta.particles[0];
      const Bits same = alpha ? d1.alpha : d1.beta;
      const Bits other = alpha ? d1.beta : d1.alpha;
      double v = t.h(m, p);
      for_each_bit(same, [&](int n) { v += t.v(m, p, n, n) - t.v(m, n, n, p); });
      for_each_bit(other, [&](int n) { v += t.v(m, p, n, n); });
      return ex.phase * v;
    }
    case 2: {
      if (ex.alpha.count == 1) {
        return ex.phase * t.v(ex.alpha.holes[0], ex.alpha.particles[0], ex.beta.holes[0],
                              ex.beta.particles[0]);
      }
      const SpinExcitation& s = ex.alpha.count == 2 ? ex.alpha : ex.beta;
      const int m = s.holes[0], n = s.holes[1], p = s.particles[0], q = s.particles[1];
      return ex.phase * (t.v(m, p, n, q) - t.v(m, q, n, p));
    }
    default:
      return 0.0;
  }
}

namespace {

void check_sizes(std::size_t dim, std::size_t x, std::size_t y) {
  if (x != dim || y != dim) {
    throw UsageError(fmt::format("operator of dimension {} applied to vectors of size {} -> {}",
                                 dim, x, y));
  }
}

}  // namespace

// --- DiagonalOperator -------------------------------------------------------

DiagonalOperator::DiagonalOperator(BasisPtr basis, std::vector<double> diag)
    : basis_(std::move(basis)), diag_(std::move(diag)) {
  if (!basis_ || basis_->size() != diag_.size()) {
    throw UsageError("diagonal operator: basis and diagonal sizes differ");
  }
}

void DiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_sizes(dim(), x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = diag_[i] * x[i];
}

void DiagonalOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  check_sizes(dim(), x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = diag_[i] * x[i];
}

// --- SparseHamiltonian -------------------------------------------------------

namespace {

struct CscBuild {
  std::vector<std::uint64_t> col_ptr;
  std::vector<std::uint32_t> row_idx;
  std::vector<double> values;
};

// rows[i] holds (j, v) with j > i sorted by j. Mirrors into both triangles.
template <class Rows>
CscBuild build_csc(std::size_t dim, const Rows& rows) {
  CscBuild out;
  out.col_ptr.assign(dim + 1, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (const auto& [j, v] : rows[i]) {
      ++out.col_ptr[j + 1];
      ++out.col_ptr[i + 1];
    }
  }
  for (std::size_t c = 0; c < dim; ++c) out.col_ptr[c + 1] += out.col_ptr[c];
  out.row_idx.resize(out.col_ptr[dim]);
  out.values.resize(out.col_ptr[dim]);
  std::vector<std::uint64_t> fill(out.col_ptr.begin(), out.col_ptr.end() - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    for (const auto& [j, v] : rows[i]) {
      out.row_idx[fill[j]] = static_cast<std::uint32_t>(i);
      out.values[fill[j]++] = v;
      out.row_idx[fill[i]] = static_cast<std::uint32_t>(j);
      out.values[fill[i]++] = v;
    }
  }
  return out;
}

}  // namespace

SparseHamiltonian::SparseHamiltonian(BasisPtr basis, std::vector<double> diag,
                                     std::vector<Triplet> upper)
    : basis_(std::move(basis)), diag_(std::move(diag)) {
  if (!basis_ || basis_->size() != diag_.size()) {
    throw UsageError("sparse Hamiltonian: basis and diagonal sizes differ");
  }
  const std::size_t dim = diag_.size();
  for (const auto& tr : upper) {
    if (tr.row >= tr.col || tr.col >= dim) {
      throw UsageError(fmt::format("triplet ({}, {}) is not strictly upper within dimension {}",
                                   tr.row, tr.col, dim));
    }
  }
  std::sort(upper.begin(), upper.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(dim);
  for (std::size_t k = 0; k < upper.size(); ++k) {
    if (k > 0 && upper[k].row == upper[k - 1].row && upper[k].col == upper[k - 1].col) {
      throw UsageError(fmt::format("duplicate triplet ({}, {})", upper[k].row, upper[k].col));
    }
    if (std::abs(upper[k].value) >= kDropTolerance) {
      rows[upper[k].row].emplace_back(upper[k].col, upper[k].value);
    }
  }
  auto csc = build_csc(dim, rows);
  col_ptr_ = std::move(csc.col_ptr);
  row_idx_ = std::move(csc.row_idx);
  values_ = std::move(csc.values);
}

template <class T>
void SparseHamiltonian::apply_impl(std::span<const T> x, std::span<T> y) const {
  check_sizes(dim(), x.size(), y.size());
  const auto n = static_cast<std::int64_t>(dim());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) {
    T acc = diag_[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    for (std::uint64_t k = col_ptr_[static_cast<std::size_t>(j)];
         k < col_ptr_[static_cast<std::size_t>(j) + 1]; ++k) {
      acc += values_[k] * x[row_idx_[k]];
    }
    y[static_cast<std::size_t>(j)] = acc;
  }
}

void SparseHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl(x, y);
}

void SparseHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl(x, y);
}

double SparseHamiltonian::value(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw UsageError("matrix index out of range");
  if (i == j) return diag_[i];
  const auto first = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[j]);
  const auto last = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[j + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(i));
  if (it == last || *it != i) return 0.0;
  return values_[static_cast<std::size_t>(it - row_idx_.begin())];
}

std::vector<Triplet> SparseHamiltonian::upper_triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size() / 2);
  for (std::size_t c = 0; c < dim(); ++c) {
    for (std::uint64_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      if (row_idx_[k] < c) out.push_back({row_idx_[k], static_cast<std::uint32_t>(c), values_[k]});
    }
  }
  return out;
}

// --- assembly -----------------------------------------------------------------

BasisIndex::BasisIndex(const Basis& basis) {
  map_.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!map_.emplace(basis[i], static_cast<std::uint32_t>(i)).second) {
      throw UsageError(fmt::format("duplicate determinant at position {}", i));
    }
  }
}

void check_basis(const Basis& dets, const IntegralTable& t) {
  if (dets.empty()) throw UsageError("empty determinant list");
  if (dets.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw UsageError("determinant list exceeds 32-bit indexing");
  }
  for (const auto& d : dets) {
    check_determinant(d, t.n_orb());
    if (popcount(d.alpha) != t.n_alpha() || popcount(d.beta) != t.n_beta()) {
      throw UsageError(fmt::format("determinant {} is outside the ({}, {}) particle sector",
                                   to_string(d, t.n_orb()), t.n_alpha(), t.n_beta()));
    }
  }
}

SparseHamiltonian assemble(BasisPtr dets, const IntegralTable& t) {
  check_basis(*dets, t);
  const BasisIndex index(*dets);
  const std::size_t dim = dets->size();
  std::vector<double> diag(dim);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(dim);
  const auto n = static_cast<std::int64_t>(dim);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Determinant& d = (*dets)[i];
    diag[i] = diagonal_element(d, t);
    auto& row = rows[i];
    for_each_connection(d, t, kDropTolerance, [&](const Determinant& c, double v) {
      const std::int64_t j = index.find(c);
      if (j > ii) row.emplace_back(static_cast<std::uint32_t>(j), v);
    });
    std::sort(row.begin(), row.end());
  }
  auto csc = build_csc(dim, rows);
  rows = {};
  return SparseHamiltonian(std::move(dets), std::move(diag), std::move(csc.col_ptr),
                           std::move(csc.row_idx), std::move(csc.values));
}

// --- matrix-free ---------------------------------------------------------------

MatrixFreeHamiltonian::MatrixFreeHamiltonian(BasisPtr dets, IntegralTable table)
    : basis_(std::move(dets)), table_(std::move(table)), index_((check_basis(*basis_, table_), *basis_)) {
  diag_.resize(basis_->size());
  for (std::size_t i = 0; i < basis_->size(); ++i) diag_[i] = diagonal_element((*basis_)[i], table_);
}

template <class T>
void MatrixFreeHamiltonian::apply_impl(std::span<const T> x, std::span<T> y) const {
  check_sizes(dim(), x.size(), y.size());
  const auto n = static_cast<std::int64_t>(dim());
  // Row i gathers sum_j H_ij x_j; H is symmetric so <d_j|H|d_i> = H_ij.
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    T acc = diag_[i] * x[i];
    for_each_connection((*basis_)[i], table_, kDropTolerance, [&](const Determinant& c, double v) {
      const std::int64_t j = index_.find(c);
      if (j >= 0) acc += v * x[static_cast<std::size_t>(j)];
    });
    y[i] = acc;
  }
}

void MatrixFreeHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl(x, y);
}

void MatrixFreeHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl(x, y);
}

// --- interpolation ---------------------------------------------------------------

InterpolatedPair::InterpolatedPair(std::shared_ptr<const HamiltonianOperator> init,
                                   std::shared_ptr<const HamiltonianOperator> target)
    : init_(std::move(init)), target_(std::move(target)) {
  if (!init_ || !target_) throw UsageError("interpolation needs two operators");
  if (init_->dim() != target_->dim()) {
    throw UsageError(fmt::format("initial ({}) and target ({}) operators differ in dimension",
                                 init_->dim(), target_->dim()));
  }
  if (init_->basis() != target_->basis() && *init_->basis() != *target_->basis()) {
    throw UsageError("initial and target operators act on different determinant lists");
  }
}

InterpolatedOperator::InterpolatedOperator(const InterpolatedPair& pair, double f)
    : pair_(&pair), f_(f), diag_(pair.dim()) {
  const auto a = pair.init().diagonal();
  const auto b = pair.target().diagonal();
  for (std::size_t i = 0; i < diag_.size(); ++i) diag_[i] = (1.0 - f) * a[i] + f * b[i];
}

void InterpolatedOperator::apply(std::span<const double> x, std::span<double> y) const {
  pair_->apply(f_, x, y);
}

void InterpolatedOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  pair_->apply(f_, x, y);
}

// --- binary image -----------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic{'A', 'S', 'P', 'S', 'I', 'M', 'H', '\0'};
constexpr std::uint32_t kImageVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("truncated Hamiltonian image", 0);
  return v;
}

}  // namespace

void save_hamiltonian(const std::filesystem::path& path, const SparseHamiltonian& h, int n_orb) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const auto upper = h.upper_triplets();
  out.write(kMagic.data(), kMagic.size());
  put(out, kImageVersion);
  put(out, static_cast<std::int32_t>(n_orb));
  put(out, static_cast<std::uint64_t>(h.dim()));
  put(out, static_cast<std::uint64_t>(upper.size()));
  for (const auto& d : *h.basis()) {
    put(out, d.alpha);
    put(out, d.beta);
  }
  for (double v : h.diagonal()) put(out, v);
  for (const auto& t : upper) {
    put(out, t.row);
    put(out, t.col);
    put(out, t.value);
  }
  if (!out) throw Error("write failed for " + path.string());
}

SparseHamiltonian load_hamiltonian(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ParseError(path.string() + " is not a Hamiltonian image", 0);
  const auto version = get<std::uint32_t>(in);
  if (version != kImageVersion) {
    throw ParseError(fmt::format("unsupported Hamiltonian image version {}", version), 0);
  }
  const auto n_orb = get<std::int32_t>(in);
  const auto dim = get<std::uint64_t>(in);
  const auto nnz = get<std::uint64_t>(in);
  if (n_orb < 1 || n_orb > kMaxOrbitals || dim == 0 || dim > std::numeric_limits<std::uint32_t>::max()) {
    throw ParseError("corrupt Hamiltonian image header", 0);
  }
  auto basis = std::make_shared<Basis>(dim);
  for (auto& d : *basis) {
    d.alpha = get<Bits>(in);
    d.beta = get<Bits>(in);
    check_determinant(d, n_orb);
  }
  std::vector<double> diag(dim);
  for (auto& v : diag) v = get<double>(in);
  std::vector<Triplet> upper(nnz);
  for (auto& t : upper) {
    t.row = get<std::uint32_t>(in);
    t.col = get<std::uint32_t>(in);
    t.value = get<double>(in);
  }
  try {
    return SparseHamiltonian(std::move(basis), std::move(diag), std::move(upper));
  } catch (const UsageError& e) {
    throw ParseError(std::string("corrupt Hamiltonian image: ") + e.what(), 0);
  }
}

}  // namespace aspsim
