// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "aspsim/errors.hpp"
#include "aspsim/fcidump.hpp"
#include "aspsim/full_space.hpp"

namespace aspsim {

std::string SystemSpec::id() const {
  if (source == Source::fcidump) {
    return fmt::format("{}_fc{}", fcidump.stem().string(), frozen_core);
  }
  const auto& h = hubbard;
  return fmt::format("hubbard_{}x{}{}_U{:g}_eps{:g}_{}a{}b_{}", h.rows, h.cols, h.periodic ? "p" : "o", h.U,
                     h.stagger_eps, h.n_alpha, h.n_beta, orbitals == Orbitals::scf ? "scf" : "site");
}

IntegralTable load_system(const SystemSpec& spec) {
  if (spec.source == SystemSpec::Source::fcidump) {
    auto table = read_fcidump(spec.fcidump);
    return spec.frozen_core > 0 ? freeze_core(table, spec.frozen_core) : table;
  }
  if (spec.orbitals == SystemSpec::Orbitals::scf) return hubbard_scf(spec.hubbard).mo_table;
  return build_hubbard(spec.hubbard);
}

namespace {

// Initial operator, start state and target state for a built target.
void complete(Problem& p, const IntegralTable& table, const InitialHamiltonianSpec& initial, const EigOptions& eig) {
  const Determinant ref = hartree_fock_det(table.n_alpha(), table.n_beta(), table.n_orb());
  p.initial = std::make_shared<const SparseHamiltonian>(make_initial(*p.target, initial, ref));
  p.pair = std::make_unique<InterpolatedPair>(p.initial, p.target);

  if (initial.kind == InitialHamiltonianSpec::Kind::diagonal) {
    const auto d = p.initial->diagonal();
    p.psi0.assign(d.size(), 0.0);
    p.psi0[static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin())] = 1.0;
  } else {
    p.psi0 = to_complex(lowest_eigenpairs(*p.initial, 1, eig)[0].vector);
  }
  auto g = lowest_eigenpairs(*p.target, 1, eig)[0];
  p.ground = {g.value, std::move(g.vector)};
}

}  // namespace

Problem make_problem(const IntegralTable& table, std::vector<Determinant> dets,
                     const InitialHamiltonianSpec& initial, const OperatorPolicy& policy, const EigOptions& eig) {
  if (dets.empty()) throw UsageError("empty determinant space");
  std::sort(dets.begin(), dets.end());
  if (std::adjacent_find(dets.begin(), dets.end()) != dets.end()) {
    throw UsageError("determinant space contains duplicates");
  }
  Problem p;
  auto basis = std::make_shared<const Basis>(std::move(dets));
  if (policy.matrix_free) p.target = std::make_shared<const MatrixFreeHamiltonian>(basis, table);
  else p.target = std::make_shared<const SparseHamiltonian>(assemble(basis, table));
  complete(p, table, initial, eig);
  return p;
}

Problem make_fci_problem(const IntegralTable& table, const InitialHamiltonianSpec& initial, std::size_t cap,
                         const OperatorPolicy& policy, const EigOptions& eig) {
  const auto size = full_space_size(table.n_alpha(), table.n_beta(), table.n_orb());
  if (size > cap) {
    throw ConfigError(fmt::format("full CI reference refused: {} determinants exceed the cap of {}", size, cap));
  }
  if (size <= policy.full_space_direct_above) {
    return make_problem(table, full_space(table.n_alpha(), table.n_beta(), table.n_orb()), initial, policy, eig);
  }
  Problem p;
  p.target = std::make_shared<const FullSpaceHamiltonian>(table);
  complete(p, table, initial, eig);
  return p;
}

cplx padded_inner(const Basis& basis_a, std::span<const cplx> a, const Basis& basis_b, std::span<const cplx> b) {
  cplx acc = 0.0;
  std::size_t i = 0, j = 0;
  while (i < basis_a.size() && j < basis_b.size()) {
    if (basis_a[i] < basis_b[j]) ++i;
    else if (basis_b[j] < basis_a[i]) ++j;
    else acc += std::conj(a[i++]) * b[j++];
  }
  return acc;
}

namespace {

constexpr std::array<std::pair<StudyKind, const char*>, 6> kStudyNames{{
    {StudyKind::evolved_state_error, "evolved_state_error"},
    {StudyKind::overlap_prediction_error, "overlap_prediction_error"},
    {StudyKind::gap_error, "gap_error"},
    {StudyKind::dt_convergence, "dt_convergence"},
    {StudyKind::core_size_error, "core_size_error"},
    {StudyKind::truncation_comparison, "truncation_comparison"},
}};

}  // namespace

std::string to_string(StudyKind kind) {
  for (const auto& [k, name] : kStudyNames)
    if (k == kind) return name;
  return "unknown";
}

StudyKind parse_study_kind(const std::string& name) {
  for (const auto& [k, n] : kStudyNames)
    if (name == n) return k;
  throw ConfigError("unknown study kind '" + name + "'");
}

void StudyParams::validate() const {
  if (!(total_time > 0.0)) throw ConfigError("study total time must be positive");
  propagation.validate();
  ground.validate();
  if (excited.target_size > 0) excited.validate();
  if (gap_points < 2) throw ConfigError("gap study needs at least 2 sample points");
  if (dt_values.empty()) throw ConfigError("dt study needs at least one time step");
  for (double dt : dt_values)
    if (!(dt > 0.0)) throw ConfigError(fmt::format("time step {} must be positive", dt));
  if (!(small_core_fraction > 0.0 && small_core_fraction <= 1.0)) {
    throw ConfigError("small core fraction must lie in (0, 1]");
  }
  if (truncation_samples < 1) throw ConfigError("truncation study needs at least one sample");
}

nlohmann::json StudyParams::to_json() const {
  auto asci = [](const AsciConfig& c) {
    return nlohmann::json{{"target_size", c.target_size}, {"core_size", c.core_size}, {"e_tol", c.e_tol},
                          {"root", c.root}};
  };
  return {{"total_time", total_time},
          {"schedule", {{"kind", to_string(schedule.kind)}, {"c", schedule.c}}},
          {"dt", propagation.dt},
          {"krylov_tol", propagation.krylov_tol},
          {"initial", to_string(initial.kind)},
          {"active_orbitals", initial.active_orbitals},
          {"asci_ground", asci(ground)},
          {"asci_excited", asci(excited)},
          {"fci_cap", fci_cap},
          {"matrix_free", policy.matrix_free},
          {"gap_points", gap_points},
          {"dt_values", dt_values},
          {"dt_in_full_space", dt_in_full_space},
          {"small_core_fraction", small_core_fraction},
          {"truncation_every_step", truncation_every_step},
          {"truncation_samples", truncation_samples}};
}

void Series::push(int k, double sk, double v) {
  step.push_back(k);
  s.push_back(sk);
  value.push_back(v);
}

double Series::max() const {
  return value.empty() ? kMissing : *std::max_element(value.begin(), value.end());
}

const Series& StudyReport::at(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw UsageError("report has no series '" + name + "'");
}

std::string StudyReport::stem() const {
  std::string out = fmt::format("{}_{}", to_string(kind), system_id);
  if (params.contains("total_time")) out += fmt::format("_T{:g}", params["total_time"].get<double>());
  if (params.contains("asci_ground")) {
    out += fmt::format("_tg{}_te{}", params["asci_ground"]["target_size"].get<std::size_t>(),
                       params["asci_excited"]["target_size"].get<std::size_t>());
  }
  return out;
}

std::vector<std::filesystem::path> StudyReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw Error("cannot write " + p.string());
    files.push_back(p);
    return f;
  };
  for (const auto& s : series) {
    auto f = open(dir / fmt::format("{}_{}.csv", stem(), s.name));
    f << "step,s," << s.name << '\n';
    for (std::size_t i = 0; i < s.value.size(); ++i) f << fmt::format("{},{:.17g},{:.17g}\n", s.step[i], s.s[i], s.value[i]);
  }
  for (const auto& [name, trace] : traces) {
    auto f = open(dir / fmt::format("{}_{}_trace.csv", stem(), name));
    trace.write_csv(f);
  }
  nlohmann::json j{{"kind", to_string(kind)}, {"system", system_id}, {"params", params}, {"summary", summary}};
  j["series"] = nlohmann::json::array();
  for (const auto& s : series) j["series"].push_back(s.name);
  auto f = open(dir / (stem() + "_summary.json"));
  f << j.dump(2) << '\n';
  return files;
}

namespace {

using States = std::vector<std::vector<cplx>>;

class StudyRunner {
 public:
  StudyRunner(const IntegralTable& table, const StudyParams& params) : table_(table), params_(params) {}

  Problem asci(const AsciConfig& ground, const AsciConfig& excited) const {
    return make_problem(table_, dynamics_space(table_, ground, excited), params_.initial, params_.policy,
                        params_.eig);
  }
  Problem asci() const { return asci(params_.ground, params_.excited); }
  Problem fci() const {
    return make_fci_problem(table_, params_.initial, params_.fci_cap, params_.policy, params_.eig);
  }

  EvolutionResult run(const Problem& p, const StepObserver& observer = {}, double dt = 0.0,
                      bool energies = false) const {
    PropagationConfig cfg = params_.propagation;
    if (dt > 0.0) cfg.dt = dt;
    TraceOptions opt;
    opt.energy_every_step = energies;
    return evolve(*p.pair, p.psi0, params_.schedule, params_.total_time, cfg, opt, p.ground.vector, observer);
  }

  /// Evolves and keeps every step's state.
  std::pair<EvolutionTrace, States> run_keeping(const Problem& p) const {
    States states;
    auto r = run(p, [&](const TraceRow&, std::span<const cplx> psi) { states.emplace_back(psi.begin(), psi.end()); });
    return {std::move(r.trace), std::move(states)};
  }

 private:
  const IntegralTable& table_;
  const StudyParams& params_;
};

double state_error(const Basis& ba, std::span<const cplx> a, const Basis& bb, std::span<const cplx> b) {
  return std::max(0.0, 1.0 - std::norm(padded_inner(ba, a, bb, b)));
}

nlohmann::json describe(const Series& s) {
  if (s.value.empty()) return {{"points", 0}};
  const auto it = std::max_element(s.value.begin(), s.value.end());
  const auto i = static_cast<std::size_t>(it - s.value.begin());
  return {{"points", s.value.size()}, {"max", *it}, {"max_s", s.s[i]}, {"final", s.value.back()}};
}

nlohmann::json sizes(const Problem& p, const std::string& label) {
  return {{label + "_dimension", p.basis()->size()}, {label + "_ground_energy", p.ground.energy}};
}

}  // namespace

StudyReport run_study(StudyKind kind, const IntegralTable& table, const std::string& system_id,
                      const StudyParams& params) {
  params.validate();
  StudyReport rep;
  rep.kind = kind;
  rep.system_id = system_id;
  rep.params = params.to_json();
  rep.summary = nlohmann::json::object();
  const StudyRunner runner(table, params);

  switch (kind) {
    case StudyKind::evolved_state_error:
    case StudyKind::overlap_prediction_error: {
      const bool keep = kind == StudyKind::evolved_state_error;
      EvolutionTrace ta;
      States sa;
      BasisPtr basis_a;
      {
        const auto a = runner.asci();
        basis_a = a.basis();
        rep.summary.update(sizes(a, "asci"));
        if (keep) std::tie(ta, sa) = runner.run_keeping(a);
        else ta = runner.run(a).trace;
      }
      const auto f = runner.fci();
      rep.summary.update(sizes(f, "fci"));
      Series state{"evolved_state_error", {}, {}, {}};
      auto observer = [&](const TraceRow& row, std::span<const cplx> psi) {
        const auto k = static_cast<std::size_t>(row.step - 1);
        state.push(row.step, row.s, state_error(*basis_a, sa[k], *f.basis(), psi));
      };
      const auto tf = keep ? runner.run(f, observer).trace : runner.run(f).trace;
      Series over{"overlap_prediction_error", {}, {}, {}};
      Series oa{"overlap_asci", {}, {}, {}}, of{"overlap_fci", {}, {}, {}};
      for (std::size_t k = 0; k < tf.rows.size(); ++k) {
        const auto& ra = ta.rows[k];
        const auto& rf = tf.rows[k];
        over.push(rf.step, rf.s, std::abs(ra.overlap_target - rf.overlap_target));
        oa.push(ra.step, ra.s, ra.overlap_target);
        of.push(rf.step, rf.s, rf.overlap_target);
      }
      if (keep) rep.series.push_back(std::move(state));
      rep.series.push_back(std::move(over));
      rep.series.push_back(std::move(oa));
      rep.series.push_back(std::move(of));
      rep.summary["initial_overlap_asci"] = ta.initial.overlap_target;
      rep.summary["initial_overlap_fci"] = tf.initial.overlap_target;
      rep.traces.emplace_back("asci", std::move(ta));
      rep.traces.emplace_back("fci", tf);
      break;
    }

    case StudyKind::gap_error: {
      const auto a = runner.asci();
      const auto f = runner.fci();
      rep.summary.update(sizes(a, "asci"));
      rep.summary.update(sizes(f, "fci"));
      Series err{"gap_percent_error", {}, {}, {}}, ga{"gap_asci", {}, {}, {}}, gf{"gap_fci", {}, {}, {}};
      // Walk from s = 1 down so the first solve starts from the known target ground state.
      EigOptions ea = params.gap_eig, ef = params.gap_eig;
      ea.seeds = {a.ground.vector};
      ef.seeds = {f.ground.vector};
      std::vector<std::pair<double, double>> gaps(static_cast<std::size_t>(params.gap_points));
      for (int j = params.gap_points - 1; j >= 0; --j) {
        const double frac = schedule_value(params.schedule, static_cast<double>(j) / (params.gap_points - 1));
        const auto pa = lowest_eigenpairs(InterpolatedOperator(*a.pair, frac), 2, ea);
        const auto pf = lowest_eigenpairs(InterpolatedOperator(*f.pair, frac), 2, ef);
        ea.seeds = {pa[0].vector, pa[1].vector};
        ef.seeds = {pf[0].vector, pf[1].vector};
        gaps[static_cast<std::size_t>(j)] = {pa[1].value - pa[0].value, pf[1].value - pf[0].value};
      }
      for (int j = 0; j < params.gap_points; ++j) {
        const double s = static_cast<double>(j) / (params.gap_points - 1);
        const auto [gap_a, gap_f] = gaps[static_cast<std::size_t>(j)];
        err.push(j, s, 100.0 * std::abs(gap_a - gap_f) / gap_f);
        ga.push(j, s, gap_a);
        gf.push(j, s, gap_f);
      }
      rep.series.push_back(std::move(err));
      rep.series.push_back(std::move(ga));
      rep.series.push_back(std::move(gf));
      break;
    }

    case StudyKind::dt_convergence: {
      const auto p = params.dt_in_full_space ? runner.fci() : runner.asci();
      rep.summary.update(sizes(p, params.dt_in_full_space ? "fci" : "asci"));
      auto dts = params.dt_values;
      std::sort(dts.begin(), dts.end(), std::greater<>());
      nlohmann::json finals = nlohmann::json::object();
      for (double dt : dts) {
        auto trace = runner.run(p, {}, dt, true).trace;
        Series s{fmt::format("overlap_dt{:g}", dt), {}, {}, {}};
        for (const auto& row : trace.rows) s.push(row.step, row.s, row.overlap_target);
        finals[fmt::format("{:g}", dt)] = trace.final_row().overlap_target;
        rep.series.push_back(std::move(s));
        rep.traces.emplace_back(fmt::format("dt{:g}", dt), std::move(trace));
      }
      const double reference = finals[fmt::format("{:g}", dts.back())].get<double>();
      nlohmann::json deltas = nlohmann::json::object();
      for (const auto& [k, v] : finals.items()) deltas[k] = std::abs(v.get<double>() - reference);
      rep.summary["final_overlap"] = finals;
      rep.summary["final_overlap_delta"] = deltas;
      break;
    }

    case StudyKind::core_size_error: {
      auto small = [&](AsciConfig c) {
        c.core_size = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(params.small_core_fraction * static_cast<double>(c.target_size))));
        return c;
      };
      auto wide = [](AsciConfig c) {
        c.core_size = c.target_size;
        return c;
      };
      EvolutionTrace ta;
      States sa;
      BasisPtr basis_a;
      {
        const auto a = runner.asci(wide(params.ground), wide(params.excited));
        basis_a = a.basis();
        rep.summary["full_core_dimension"] = a.basis()->size();
        rep.summary["full_core_ground_energy"] = a.ground.energy;
        std::tie(ta, sa) = runner.run_keeping(a);
      }
      const auto b = runner.asci(small(params.ground), small(params.excited));
      rep.summary["small_core_dimension"] = b.basis()->size();
      rep.summary["small_core_ground_energy"] = b.ground.energy;
      Series state{"state_difference", {}, {}, {}}, over{"overlap_difference", {}, {}, {}};
      const auto tb = runner.run(b, [&](const TraceRow& row, std::span<const cplx> psi) {
        const auto k = static_cast<std::size_t>(row.step - 1);
        state.push(row.step, row.s, state_error(*basis_a, sa[k], *b.basis(), psi));
        over.push(row.step, row.s, std::abs(ta.rows[k].overlap_target - row.overlap_target));
      }).trace;
      rep.series.push_back(std::move(state));
      rep.series.push_back(std::move(over));
      rep.traces.emplace_back("full_core", std::move(ta));
      rep.traces.emplace_back("small_core", tb);
      break;
    }

    case StudyKind::truncation_comparison: {
      const auto f = runner.fci();
      rep.summary.update(sizes(f, "fci"));
      const auto& full = *f.basis();

      // Largest |C| over the exact ground and first excited states at the
      // sampled points of the path.
      std::vector<double> score(full.size(), 0.0);
      const int samples = params.truncation_every_step ? params.truncation_samples : 1;
      EigOptions eo = params.gap_eig;
      for (int j = 0; j < samples; ++j) {
        const double s = samples == 1 ? 1.0 : static_cast<double>(j) / (samples - 1);
        const auto pairs = lowest_eigenpairs(InterpolatedOperator(*f.pair, schedule_value(params.schedule, s)), 2, eo);
        eo.seeds = {pairs[0].vector, pairs[1].vector};
        for (const auto& p : pairs)
          for (std::size_t i = 0; i < full.size(); ++i) score[i] = std::max(score[i], std::abs(p.vector[i]));
      }

      EvolutionTrace ta, tt;
      States sa, st;
      BasisPtr basis_a, basis_t;
      {
        const auto a = runner.asci();
        basis_a = a.basis();
        rep.summary.update(sizes(a, "asci"));
        std::tie(ta, sa) = runner.run_keeping(a);
      }
      {
        const std::size_t n = std::min(basis_a->size(), full.size());
        std::vector<std::size_t> order(full.size());
        std::iota(order.begin(), order.end(), 0);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                          [&](std::size_t x, std::size_t y) { return score[x] != score[y] ? score[x] > score[y] : x < y; });
        std::vector<Determinant> dets(n);
        for (std::size_t k = 0; k < n; ++k) dets[k] = full[order[k]];
        const auto t = make_problem(table, std::move(dets), params.initial, params.policy, params.eig);
        basis_t = t.basis();
        rep.summary.update(sizes(t, "truncation"));
        std::tie(tt, st) = runner.run_keeping(t);
      }
      Series as{"asci_state_error", {}, {}, {}}, ts{"truncation_state_error", {}, {}, {}};
      Series ao{"asci_overlap_error", {}, {}, {}}, to{"truncation_overlap_error", {}, {}, {}};
      const auto tf = runner.run(f, [&](const TraceRow& row, std::span<const cplx> psi) {
        const auto k = static_cast<std::size_t>(row.step - 1);
        as.push(row.step, row.s, state_error(*basis_a, sa[k], full, psi));
        ts.push(row.step, row.s, state_error(*basis_t, st[k], full, psi));
        ao.push(row.step, row.s, std::abs(ta.rows[k].overlap_target - row.overlap_target));
        to.push(row.step, row.s, std::abs(tt.rows[k].overlap_target - row.overlap_target));
      }).trace;
      rep.summary["truncation_samples"] = samples;
      for (auto* s : {&as, &ts, &ao, &to}) rep.series.push_back(std::move(*s));
      rep.traces.emplace_back("asci", std::move(ta));
      rep.traces.emplace_back("truncation", std::move(tt));
      rep.traces.emplace_back("fci", tf);
      break;
    }
  }

  for (const auto& s : rep.series) rep.summary[s.name] = describe(s);
  return rep;
}

}  // namespace aspsim
