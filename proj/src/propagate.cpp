// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aspsim/errors.hpp"

namespace aspsim {

void PropagationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError(fmt::format("dt = {} must be positive", dt));
  if (!(krylov_tol > 0.0 && krylov_tol < 1.0)) {
    throw ConfigError(fmt::format("krylov_tol = {} outside (0, 1)", krylov_tol));
  }
  if (krylov_max < 1) throw ConfigError(fmt::format("krylov_max = {} must be at least 1", krylov_max));
}

namespace {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(std::span<const cplx> a) {
  double acc = 0.0;
  for (const auto& z : a) acc += std::norm(z);
  return std::sqrt(acc);
}

}  // namespace

double squared_overlap(std::span<const cplx> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("overlap of vectors with different dimensions");
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return std::norm(acc);
}

std::vector<cplx> to_complex(std::span<const double> v) { return {v.begin(), v.end()}; }

KrylovResult krylov_step(const HamiltonianOperator& h, std::span<const cplx> v, double dt,
                         const PropagationConfig& cfg, bool renormalize) {
  const std::size_t n = h.dim();
  if (v.size() != n) throw UsageError("krylov_step: state dimension does not match the operator");
  const double beta0 = norm(v);
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw UsageError("krylov_step: state has zero or non-finite norm");

  const int cap = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.krylov_max), n));
  std::vector<std::vector<cplx>> basis;
  basis.reserve(static_cast<std::size_t>(cap));
  basis.emplace_back(v.begin(), v.end());
  for (auto& z : basis[0]) z /= beta0;

  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis j and j + 1
  std::vector<cplx> w(n);
  Eigen::VectorXcd coeff;
  KrylovResult out;

  for (int m = 1;; ++m) {
    const auto& vj = basis.back();
    h.apply(std::span<const cplx>(vj), std::span<cplx>(w));
    const double a = dot(vj, w).real();
    alpha.push_back(a);
    // Full reorthogonalization (twice) against every basis vector; this
    // subsumes the three-term recursion.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const cplx c = dot(b, w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
      }
    }
    const double b = norm(w);

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd phase(m);
    for (int k = 0; k < m; ++k) {
      phase(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * dt)) * q(0, k);
    }
    coeff = q.cast<cplx>() * phase;

    out.dimension = m;
    out.last_coefficient = std::abs(coeff(m - 1));
    const bool breakdown = b < 1e-14 * std::max(1.0, std::abs(a));
    if (breakdown || (m > 1 && out.last_coefficient < cfg.krylov_tol)) break;
    if (m == cap) {
      out.converged = m == static_cast<int>(n);
      break;
    }
    beta.push_back(b);
    std::vector<cplx> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
    basis.push_back(std::move(next));
  }

  out.state.assign(n, cplx{});
  for (int k = 0; k < out.dimension; ++k) {
    const cplx c = coeff(k) * beta0;
    const auto& bk = basis[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < n; ++i) out.state[i] += c * bk[i];
  }
  out.norm = norm(out.state);
  if (renormalize) {
    for (auto& z : out.state) z /= out.norm;
  }
  return out;
}

int EvolutionTrace::max_krylov_dim() const {
  int m = 0;
  for (const auto& r : rows) m = std::max(m, r.krylov_dim);
  return m;
}

namespace {

std::string cell(double v) { return std::isnan(v) ? std::string() : fmt::format("{:.17g}", v); }

nlohmann::json jnum(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

nlohmann::json row_json(const TraceRow& r) {
  return {{"step", r.step},
          {"t", r.t},
          {"s", r.s},
          {"f", r.f},
          {"norm", r.norm},
          {"overlap_target", jnum(r.overlap_target)},
          {"energy_expect", jnum(r.energy_expect)},
          {"krylov_dim", r.krylov_dim},
          {"krylov_converged", r.krylov_converged},
          {"e0", jnum(r.e0)},
          {"e1", jnum(r.e1)},
          {"gap", jnum(r.gap)},
          {"overlap_instant", jnum(r.overlap_instant)},
          {"adiabatic_numerator", jnum(r.adiabatic_numerator)},
          {"eig_failed", r.eig_failed}};
}

}  // namespace

void EvolutionTrace::write_csv(std::ostream& out) const {
  fmt::print(out,
             "step,t,s,f,norm,overlap_target,energy_expect,krylov_dim,krylov_converged,e0,e1,gap,"
             "overlap_instant,adiabatic_numerator\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.step, cell(r.t), cell(r.s),
               cell(r.f), cell(r.norm), cell(r.overlap_target), cell(r.energy_expect), r.krylov_dim,
               r.krylov_converged ? 1 : 0, cell(r.e0), cell(r.e1), cell(r.gap),
               cell(r.overlap_instant), cell(r.adiabatic_numerator));
  }
}

nlohmann::json EvolutionTrace::to_json() const {
  nlohmann::json j;
  j["total_time"] = total_time;
  j["dt"] = dt;
  j["initial"] = row_json(initial);
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) j["rows"].push_back(row_json(r));
  j["warnings"] = warnings;
  return j;
}

namespace {

// Spectral entries of the instantaneous Hamiltonian at mixing f.
void spectral_entries(const InterpolatedPair& pair, double f, std::span<const cplx> psi,
                      const TraceOptions& opt, std::vector<std::vector<double>>& warm,
                      TraceRow& row, std::vector<std::string>& warnings) {
  const InterpolatedOperator op(pair, f);
  const int k = std::min<std::size_t>(2, op.dim()) == 2 ? 2 : 1;
  EigOptions eo = opt.eig;
  if (eo.seeds.empty() && !warm.empty()) eo.seeds = warm;
  try {
    const auto pairs = lowest_eigenpairs(op, k, eo);
    row.e0 = pairs[0].value;
    row.overlap_instant = squared_overlap(psi, pairs[0].vector);
    warm.assign(1, pairs[0].vector);
    if (k == 2) {
      row.e1 = pairs[1].value;
      row.gap = row.e1 - row.e0;
      warm.push_back(pairs[1].vector);
      if (opt.adiabatic_numerator) {
        const auto n = op.dim();
        std::vector<double> a(n), b(n);
        pair.target().apply(std::span<const double>(pairs[0].vector), std::span<double>(a));
        pair.init().apply(std::span<const double>(pairs[0].vector), std::span<double>(b));
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += pairs[1].vector[i] * (a[i] - b[i]);
        row.adiabatic_numerator = std::abs(acc);
      }
    }
  } catch (const ConvergenceError& e) {
    row.eig_failed = true;
    warnings.push_back(fmt::format("step {}: eigensolver failed ({})", row.step, e.what()));
  }
}

double energy(const HamiltonianOperator& h, std::span<const cplx> psi) {
  std::vector<cplx> hpsi(psi.size());
  h.apply(psi, std::span<cplx>(hpsi));
  return dot(psi, hpsi).real();
}

}  // namespace

EvolutionResult evolve(const InterpolatedPair& pair, std::span<const cplx> psi0,
                       const Schedule& schedule, double total_time, const PropagationConfig& cfg,
                       const TraceOptions& opt, std::span<const double> target,
                       const StepObserver& observer) {
  cfg.validate();
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw ConfigError(fmt::format("total time T = {} must be positive", total_time));
  }
  if (psi0.size() != pair.dim()) throw UsageError("initial state dimension does not match the basis");
  if (!target.empty() && target.size() != pair.dim()) {
    throw UsageError("target state dimension does not match the basis");
  }
  if (opt.eigen_stride < 0) throw ConfigError("eigen_stride must be nonnegative");

  const auto steps = static_cast<int>(std::ceil(total_time / cfg.dt - 1e-9));
  EvolutionResult out;
  out.state.assign(psi0.begin(), psi0.end());
  auto& trace = out.trace;
  trace.total_time = total_time;
  trace.dt = cfg.dt;
  trace.rows.reserve(static_cast<std::size_t>(steps));

  std::vector<std::vector<double>> warm;
  trace.initial.norm = norm(out.state);
  if (!target.empty()) trace.initial.overlap_target = squared_overlap(out.state, target);
  trace.initial.energy_expect = energy(pair.target(), out.state);
  if (opt.eigen_stride > 0) spectral_entries(pair, 0.0, out.state, opt, warm, trace.initial, trace.warnings);

  for (int k = 0; k < steps; ++k) {
    const double t0 = k * cfg.dt;
    const double h = std::min(cfg.dt, total_time - t0);
    const double f0 = schedule_value(schedule, std::min(1.0, t0 / total_time));
    const InterpolatedOperator op(pair, f0);
    auto step = krylov_step(op, out.state, h, cfg);
    out.state = std::move(step.state);

    TraceRow row;
    row.step = k + 1;
    row.t = k + 1 == steps ? total_time : t0 + h;
    row.s = k + 1 == steps ? 1.0 : row.t / total_time;
    row.f = schedule_value(schedule, row.s);
    row.norm = step.norm;
    row.krylov_dim = step.dimension;
    row.krylov_converged = step.converged;
    if (!step.converged) {
      trace.warnings.push_back(fmt::format("step {}: Krylov dimension cap {} reached (last coefficient {:.3e})",
                                           row.step, cfg.krylov_max, step.last_coefficient));
    }
    if (!target.empty()) row.overlap_target = squared_overlap(out.state, target);
    const bool last = k + 1 == steps;
    if (opt.energy_every_step || last) row.energy_expect = energy(pair.target(), out.state);
    if (opt.eigen_stride > 0 && ((k + 1) % opt.eigen_stride == 0 || last)) {
      spectral_entries(pair, row.f, out.state, opt, warm, row, trace.warnings);
    }
    if (observer) observer(row, out.state);
    trace.rows.push_back(row);
  }
  return out;
}

}  // namespace aspsim
