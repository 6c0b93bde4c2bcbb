// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/hubbard.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

std::vector<std::pair<int, int>> hubbard_bonds(const HubbardSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) {
    throw UsageError(fmt::format("lattice dimensions {}x{} must be positive", spec.rows, spec.cols));
  }
  if (spec.periodic && (spec.rows == 2 || spec.cols == 2)) {
    throw UsageError(fmt::format(
        "periodic wrap along a dimension of length 2 would double-count a bond ({}x{})",
        spec.rows, spec.cols));
  }
  std::vector<std::pair<int, int>> bonds;
  auto site = [&](int r, int c) { return r * spec.cols + c; };
  auto add = [&](int a, int b) { bonds.emplace_back(std::min(a, b), std::max(a, b)); };
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      if (c + 1 < spec.cols) add(site(r, c), site(r, c + 1));
      else if (spec.periodic && spec.cols > 2) add(site(r, c), site(r, 0));
      if (r + 1 < spec.rows) add(site(r, c), site(r + 1, c));
      else if (spec.periodic && spec.rows > 2) add(site(r, c), site(0, c));
    }
  }
  std::sort(bonds.begin(), bonds.end());
  return bonds;
}

IntegralTable build_hubbard(const HubbardSpec& spec) {
  if (!std::isfinite(spec.t) || !std::isfinite(spec.U) || !std::isfinite(spec.stagger_eps)) {
    throw UsageError("Hubbard parameters must be finite");
  }
  const auto bonds = hubbard_bonds(spec);
  IntegralTable table(spec.n_sites(), spec.n_alpha, spec.n_beta);
  for (const auto& [i, j] : bonds) table.set_h(i, j, -spec.t);
  for (int i = 0; i < spec.n_sites(); ++i) {
    table.set_h(i, i, (i % 2 == 0 ? 1.0 : -1.0) * spec.stagger_eps);
    table.set_v(i, i, i, i, spec.U);
  }
  return table;
}

std::vector<double> fock_matrix(const IntegralTable& t, const std::vector<double>& density) {
  const int n = t.n_orb();
  std::vector<double> f(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q <= p; ++q) {
      double acc = t.h(p, q);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double d = density[static_cast<std::size_t>(r) * n + s];
          if (d != 0.0) acc += d * (2.0 * t.v(p, q, r, s) - t.v(p, r, s, q));
        }
      f[static_cast<std::size_t>(p) * n + q] = acc;
      f[static_cast<std::size_t>(q) * n + p] = acc;
    }
  }
  return f;
}

namespace {

using Mat = Eigen::MatrixXd;

Mat to_eigen(const std::vector<double>& a, int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[static_cast<std::size_t>(i) * n + j];
  return m;
}

std::vector<double> from_eigen(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<double> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = m(i, j);
  return a;
}

// Eigenvectors with a deterministic sign: largest component positive.
void fix_signs(Mat& c) {
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < c.rows(); ++i)
      if (std::abs(c(i, j)) > std::abs(c(best, j)) + 1e-12) best = i;
    if (c(best, j) < 0) c.col(j) *= -1.0;
  }
}

}  // namespace

MeanFieldResult restricted_mean_field(const IntegralTable& table, const MeanFieldOptions& opt) {
  if (table.n_alpha() != table.n_beta()) {
    throw UsageError(fmt::format("restricted mean field needs closed shell, got {} alpha / {} beta",
                                 table.n_alpha(), table.n_beta()));
  }
  const int n = table.n_orb();
  const int nocc = table.n_alpha();

  Mat h(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) h(p, q) = table.h(p, q);

  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Mat c = es.eigenvectors();
  Eigen::VectorXd eps = es.eigenvalues();
  Mat density = c.leftCols(nocc) * c.leftCols(nocc).transpose();

  std::vector<double> history;
  int iter = 0;
  double residual = 0.0;
  for (iter = 1; iter <= opt.max_iterations; ++iter) {
    const Mat f = to_eigen(fock_matrix(table, from_eigen(density)), n);
    es.compute(f);
    c = es.eigenvectors();
    eps = es.eigenvalues();
    const Mat next = c.leftCols(nocc) * c.leftCols(nocc).transpose();
    residual = (next - density).cwiseAbs().maxCoeff();
    history.push_back(residual);
    if (residual < opt.tolerance) {
      density = next;
      break;
    }
    density = (1.0 - opt.damping) * next + opt.damping * density;
  }
  if (iter > opt.max_iterations) {
    throw ConvergenceError(
        fmt::format("mean field did not converge in {} iterations (last density change {:.3e})",
                    opt.max_iterations, residual),
        std::move(history));
  }
  fix_signs(c);

  const Mat f = to_eigen(fock_matrix(table, from_eigen(density)), n);
  double energy = table.e_core();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) energy += density(p, q) * (h(p, q) + f(p, q));

  MeanFieldResult out;
  out.orbitals.n = n;
  out.orbitals.coefficients = from_eigen(c);
  out.orbitals.energies.assign(eps.data(), eps.data() + n);
  out.mo_table = rotate_orbitals(table, out.orbitals.coefficients);
  out.energy = energy;
  out.iterations = iter;
  out.residual = residual;
  return out;
}

MeanFieldResult hubbard_scf(const HubbardSpec& spec, const MeanFieldOptions& options) {
  return restricted_mean_field(build_hubbard(spec), options);
}

}  // namespace aspsim
