// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/asp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "aspsim/errors.hpp"

namespace aspsim {

std::string to_string(InitialHamiltonianSpec::Kind kind) {
  return kind == InitialHamiltonianSpec::Kind::diagonal ? "diagonal" : "casci_block";
}

InitialHamiltonianSpec::Kind parse_initial_kind(const std::string& name) {
  if (name == "diagonal") return InitialHamiltonianSpec::Kind::diagonal;
  if (name == "casci_block") return InitialHamiltonianSpec::Kind::casci_block;
  throw ConfigError("unknown initial Hamiltonian kind '" + name +
                    "' (expected diagonal or casci_block)");
}

std::string to_string(Criterion c) { return c == Criterion::overlap ? "overlap" : "energy"; }

Criterion parse_criterion(const std::string& name) {
  if (name == "overlap") return Criterion::overlap;
  if (name == "energy") return Criterion::energy;
  throw ConfigError("unknown criterion '" + name + "' (expected overlap or energy)");
}

SparseHamiltonian make_initial(const HamiltonianOperator& target, const InitialHamiltonianSpec& spec,
                               const Determinant& reference) {
  const auto d = target.diagonal();
  std::vector<double> diag(d.begin(), d.end());
  if (spec.kind == InitialHamiltonianSpec::Kind::diagonal) {
    return SparseHamiltonian(target.basis(), std::move(diag), {});
  }

  Bits active = 0;
  for (int p : spec.active_orbitals) {
    if (p < 0 || p >= kMaxOrbitals) throw UsageError(fmt::format("active orbital {} out of range", p));
    active |= Bits{1} << p;
  }
  const Bits occupied_ref = reference.alpha | reference.beta;
  if ((occupied_ref & ~active) != 0) {
    throw UsageError("active set must contain every orbital occupied in the reference determinant");
  }
  const auto* stored = dynamic_cast<const SparseHamiltonian*>(&target);
  if (stored == nullptr) throw UsageError("casci_block initial Hamiltonian needs a stored target");

  const auto& basis = *target.basis();
  std::vector<char> inside(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    inside[i] = ((basis[i].alpha | basis[i].beta) & ~active) == 0;
  }
  std::vector<Triplet> upper;
  for (const auto& t : stored->upper_triplets()) {
    if (inside[t.row] && inside[t.col]) upper.push_back(t);
  }
  return SparseHamiltonian(target.basis(), std::move(diag), std::move(upper));
}

void CriticalTimeConfig::validate() const {
  propagation.validate();
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw ConfigError(fmt::format("overlap threshold {} outside (0, 1]", overlap_threshold));
  }
  if (!(energy_threshold > 0.0)) throw ConfigError("energy threshold must be positive");
  if (!(t_cap >= propagation.dt)) throw ConfigError("t_cap must be at least dt");
}

namespace {

// Grid values are m * 10^e with integer mantissa m in [10, 99].
struct GridPoint {
  int mantissa;
  int exponent;
  [[nodiscard]] double value() const { return mantissa * std::pow(10.0, exponent); }
};

GridPoint grid_floor_point(double x) {
  int e = static_cast<int>(std::floor(std::log10(x))) - 1;
  double m = x / std::pow(10.0, e);
  // guard against log10 rounding at decade boundaries
  if (m >= 100.0 - 1e-9) {
    ++e;
    m /= 10.0;
  } else if (m < 10.0 - 1e-9) {
    --e;
    m *= 10.0;
  }
  return {static_cast<int>(std::floor(m + 1e-9)), e};
}

}  // namespace

double grid_next(double x) {
  if (!(x > 0.0)) throw UsageError("grid values are positive");
  GridPoint p = grid_floor_point(x);
  if (++p.mantissa == 100) {
    p.mantissa = 10;
    ++p.exponent;
  }
  return p.value();
}

double grid_ceil(double x) {
  if (!(x > 0.0)) throw UsageError("grid values are positive");
  const GridPoint p = grid_floor_point(x);
  return std::abs(p.value() - x) <= 1e-9 * x ? p.value() : grid_next(x);
}

nlohmann::json CriticalTimeResult::to_json() const {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  nlohmann::json evals = nlohmann::json::array();
  for (const auto& [t, v] : evaluations) evals.push_back({{"T", t}, {"value", v}});
  return {{"t_critical", t_critical},
          {"criterion", to_string(criterion)},
          {"value", value},
          {"initial_overlap", initial_overlap},
          {"min_gap", num(min_gap)},
          {"min_gap_s", num(min_gap_s)},
          {"evaluations", evals}};
}

CriticalTimeResult critical_time(const InterpolatedPair& pair, std::span<const cplx> psi0,
                                 const Schedule& schedule, const TargetState& target,
                                 const CriticalTimeConfig& cfg) {
  cfg.validate();
  if (target.vector.size() != pair.dim()) throw UsageError("target state dimension does not match the basis");

  CriticalTimeResult out;
  out.criterion = cfg.criterion;
  out.initial_overlap = squared_overlap(psi0, target.vector);

  TraceOptions cheap;
  cheap.energy_every_step = false;
  const bool by_overlap = cfg.criterion == Criterion::overlap;
  auto value_of = [&](const EvolutionTrace& tr) {
    const auto& r = tr.final_row();
    return by_overlap ? r.overlap_target : r.energy_expect - target.energy;
  };
  auto passes = [&](double v) {
    return by_overlap ? v >= cfg.overlap_threshold : v <= cfg.energy_threshold;
  };
  double best = by_overlap ? -1.0 : std::numeric_limits<double>::infinity();

  struct Run {
    double value;
    EvolutionTrace trace;
  };
  auto run = [&](double T) {
    auto r = evolve(pair, psi0, schedule, T, cfg.propagation, cheap, target.vector);
    const double v = value_of(r.trace);
    out.evaluations.emplace_back(T, v);
    best = by_overlap ? std::max(best, v) : std::min(best, v);
    return Run{v, std::move(r.trace)};
  };

  // Geometric bracket.
  double lo = 0.0;
  EvolutionTrace lo_trace;
  double hi = cfg.propagation.dt;
  Run hi_run = run(hi);
  while (!passes(hi_run.value)) {
    if (hi >= cfg.t_cap) {
      throw CriterionUnreachable(
          fmt::format("{} criterion not met for T up to {} a.u. (best {:.6g})", to_string(cfg.criterion),
                      cfg.t_cap, best),
          best);
    }
    lo = hi;
    lo_trace = std::move(hi_run.trace);
    hi = std::min(2.0 * hi, cfg.t_cap);
    hi_run = run(hi);
  }

  // Grid candidates in (lo, grid_ceil(hi)]; the first doubling point dt is
  // the smallest admissible value.
  std::vector<double> grid;
  if (lo == 0.0) {
    grid.push_back(hi);
  } else {
    for (double g = grid_next(lo); g <= grid_ceil(hi) * (1 + 1e-12); g = grid_next(g)) grid.push_back(g);
  }
  // Invariant: everything below index `left` fails, index `right` passes.
  std::size_t left = 0;
  std::size_t right = grid.size() - 1;
  Run pass_run{hi_run.value, std::move(hi_run.trace)};
  if (std::abs(grid[right] - hi) > 1e-12 * hi) pass_run = run(grid[right]);
  while (!passes(pass_run.value)) {
    // Rounding hi up to the grid should only help; fall back to the next
    // grid value if the evolution is not monotone there.
    grid.push_back(grid_next(grid.back()));
    right = grid.size() - 1;
    pass_run = run(grid[right]);
    if (grid[right] > cfg.t_cap) {
      throw CriterionUnreachable("criterion lost above the bracketing time", best);
    }
  }
  Run fail_run{0.0, std::move(lo_trace)};
  while (left < right) {
    const std::size_t mid = left + (right - left) / 2;
    Run r = run(grid[mid]);
    if (passes(r.value)) {
      right = mid;
      pass_run = std::move(r);
    } else {
      left = mid + 1;
      fail_run = std::move(r);
    }
  }
  out.t_critical = grid[right];
  out.value = pass_run.value;
  out.passing = std::move(pass_run.trace);
  out.failing = std::move(fail_run.trace);

  if (cfg.final_trace.eigen_stride > 0) {
    auto r = evolve(pair, psi0, schedule, out.t_critical, cfg.propagation, cfg.final_trace, target.vector);
    out.final_trace = std::move(r.trace);
    auto consider = [&](const TraceRow& row) {
      if (std::isnan(row.gap)) return;
      if (std::isnan(out.min_gap) || row.gap < out.min_gap) {
        out.min_gap = row.gap;
        out.min_gap_s = row.s;
      }
    };
    consider(out.final_trace.initial);
    for (const auto& row : out.final_trace.rows) consider(row);
  }
  return out;
}

}  // namespace aspsim
