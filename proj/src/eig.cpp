// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void apply(const HamiltonianOperator& op, const double* x, double* y) {
  const std::size_t n = op.dim();
  op.apply(std::span<const double>(x, n), std::span<double>(y, n));
}

EigenPair finish(double value, VectorXd v, double residual) {
  Eigen::Index big = 0;
  v.cwiseAbs().maxCoeff(&big);
  if (v(big) < 0) v = -v;
  return {value, std::vector<double>(v.data(), v.data() + v.size()), residual};
}

std::vector<EigenPair> dense_solve(const HamiltonianOperator& op, int k) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  MatrixXd h(n, n);
  VectorXd e = VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    apply(op, e.data(), h.col(j).data());
    e(j) = 0.0;
  }
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  std::vector<EigenPair> out;
  for (int i = 0; i < k; ++i) {
    const VectorXd v = es.eigenvectors().col(i);
    const double res = (h * v - es.eigenvalues()(i) * v).norm();
    out.push_back(finish(es.eigenvalues()(i), v, res));
  }
  return out;
}

// Orthonormal basis V with W = H V and the projection T = V^T H V.
class Subspace {
 public:
  Subspace(const HamiltonianOperator& op, int capacity)
      : op_(op),
        v_(static_cast<Eigen::Index>(op.dim()), capacity),
        w_(static_cast<Eigen::Index>(op.dim()), capacity),
        t_(capacity, capacity) {}

  [[nodiscard]] int size() const noexcept { return m_; }
  [[nodiscard]] int capacity() const noexcept { return static_cast<int>(v_.cols()); }
  [[nodiscard]] std::int64_t matvecs() const noexcept { return matvecs_; }
  [[nodiscard]] auto basis() const { return v_.leftCols(m_); }
  [[nodiscard]] auto image() const { return w_.leftCols(m_); }
  [[nodiscard]] auto projection() const { return t_.topLeftCorner(m_, m_); }

  /// Orthogonalizes x against the basis (twice) and appends it. Returns
  /// false when nothing independent is left.
  bool add(VectorXd x) {
    if (m_ == capacity()) return false;
    const double start = x.norm();
    if (start == 0.0 || !std::isfinite(start)) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (m_ > 0) x -= basis() * (basis().transpose() * x);
    }
    const double norm = x.norm();
    if (norm < 1e-10 * start) return false;
    v_.col(m_) = x / norm;
    apply(op_, v_.col(m_).data(), w_.col(m_).data());
    ++matvecs_;
    for (int i = 0; i <= m_; ++i) {
      const double tij = v_.col(i).dot(w_.col(m_));
      t_(i, m_) = tij;
      t_(m_, i) = tij;
    }
    ++m_;
    return true;
  }

  /// Replaces the basis by V Y (Y orthonormal columns), keeping T diagonal.
  void compress(const MatrixXd& y, const VectorXd& theta) {
    const auto p = static_cast<int>(y.cols());
    const MatrixXd nv = basis() * y;
    const MatrixXd nw = image() * y;
    v_.leftCols(p) = nv;
    w_.leftCols(p) = nw;
    t_.topLeftCorner(p, p) = theta.head(p).asDiagonal();
    m_ = p;
  }

 private:
  const HamiltonianOperator& op_;
  MatrixXd v_;
  MatrixXd w_;
  MatrixXd t_;
  int m_ = 0;
  std::int64_t matvecs_ = 0;
};

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const HamiltonianOperator& op, int k,
                                         const EigOptions& opt) {
  const std::size_t n = op.dim();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw UsageError(fmt::format("requested {} eigenpairs of a {}-dimensional operator", k, n));
  }
  if (!(opt.tol > 0.0)) throw UsageError("eigensolver tolerance must be positive");
  if (n <= opt.dense_limit) return dense_solve(op, k);

  const auto nn = static_cast<Eigen::Index>(n);
  const int capacity =
      static_cast<int>(std::min<std::size_t>(n, static_cast<std::size_t>(std::max(opt.subspace, 2 * k + 8))));
  const std::int64_t cap = opt.max_matvecs > 0 ? opt.max_matvecs : 10 * static_cast<std::int64_t>(n);
  Subspace sub(op, capacity);

  std::mt19937_64 rng(opt.rng_seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    VectorXd r(nn);
    for (Eigen::Index i = 0; i < nn; ++i) r(i) = gauss(rng);
    return r;
  };

  if (opt.seeds.empty()) {
    const auto diag = op.diagonal();
    const auto lowest = std::min_element(diag.begin(), diag.end()) - diag.begin();
    VectorXd e = VectorXd::Zero(nn);
    e(lowest) = 1.0;
    sub.add(e);
  } else {
    for (const auto& s : opt.seeds) {
      if (s.size() != n) throw UsageError("eigensolver seed has the wrong dimension");
      sub.add(Eigen::Map<const VectorXd>(s.data(), nn));
    }
  }
  if (opt.random_start || sub.size() == 0) sub.add(random_vector());

  std::vector<double> prev(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
  std::vector<double> history;
  for (;;) {
    const int m = sub.size();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(sub.projection());
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& y = es.eigenvectors();
    const bool whole_space = m == static_cast<int>(n);

    const int roots = std::min(k, m);
    std::vector<VectorXd> residuals(static_cast<std::size_t>(roots));
    int target = -1;
    double worst = 0.0;
    for (int i = 0; i < roots; ++i) {
      auto& r = residuals[static_cast<std::size_t>(i)];
      r = sub.image() * y.col(i) - theta(i) * (sub.basis() * y.col(i));
      const double res = r.norm();
      const bool done = whole_space ||
                        (std::abs(theta(i) - prev[static_cast<std::size_t>(i)]) < opt.tol &&
                         res <= 10.0 * opt.tol);
      worst = std::max(worst, res);
      prev[static_cast<std::size_t>(i)] = theta(i);
      if (!done && target < 0) target = i;
    }
    history.push_back(worst);

    if (target < 0 && roots == k) {
      std::vector<EigenPair> out;
      for (int i = 0; i < k; ++i) {
        out.push_back(finish(theta(i), sub.basis() * y.col(i), residuals[static_cast<std::size_t>(i)].norm()));
      }
      return out;
    }
    if (sub.matvecs() >= cap) {
      throw ConvergenceError(
          fmt::format("eigensolver did not converge in {} operator applications (residual {:.3e})",
                      sub.matvecs(), worst),
          std::move(history));
    }

    VectorXd raw = target >= 0 ? residuals[static_cast<std::size_t>(target)] : random_vector();
    VectorXd next = raw;
    if (opt.precondition && target >= 0) {
      // Davidson correction (D - theta)^-1 r, with the shift kept away from zero.
      const double shift = theta(target);
      const auto diag = op.diagonal();
      for (Eigen::Index i = 0; i < nn; ++i) {
        double d = diag[static_cast<std::size_t>(i)] - shift;
        if (std::abs(d) < 1e-3) d = d < 0.0 ? -1e-3 : 1e-3;
        next(i) = raw(i) / d;
      }
    }
    if (m == sub.capacity()) {
      const int keep = std::min(m - 1, std::max(k + 2, sub.capacity() / 4));
      sub.compress(y.leftCols(keep), theta);
    }
    if (!sub.add(std::move(next)) && !sub.add(std::move(raw)) && !sub.add(random_vector())) {
      // The basis spans an invariant subspace that cannot grow further.
      throw ConvergenceError("eigensolver subspace stopped growing", std::move(history));
    }
  }
}

}  // namespace aspsim
