// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <omp.h>

#include "aspsim/errors.hpp"
#include "aspsim/full_space.hpp"

#ifndef ASPSIM_VERSION
#define ASPSIM_VERSION "0.0.0"
#endif

namespace aspsim {

using nlohmann::json;

std::string version() { return ASPSIM_VERSION; }

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::evolve: return "evolve";
    case Experiment::critical_time: return "critical-time";
    case Experiment::asci_select: return "asci-select";
    case Experiment::study: return "study";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::evolve, Experiment::critical_time, Experiment::asci_select, Experiment::study})
    if (name == to_string(e)) return e;
  throw ConfigError("unknown experiment '" + name + "' (expected evolve, critical-time, asci-select or study)");
}

namespace {

// Strict reader over one JSON object: every key must be consumed.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", name()));
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        const auto v = j_.at(key).get<std::int64_t>();
        if (v < 0) throw ConfigError(fmt::format("{} must not be negative", field(key)));
        out = static_cast<T>(v);
      } else {
        out = j_.at(key).get<T>();
      }
    } catch (const json::exception&) {
      throw ConfigError(fmt::format("{} has the wrong type", field(key)));
    }
  }

  Fields sub(const char* key) {
    seen_.insert(key);
    return Fields(j_.at(key), field(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.contains(k)) throw ConfigError(fmt::format("unknown field {}", field(k)));
  }

 private:
  [[nodiscard]] std::string name() const { return path_.empty() ? "config" : path_; }
  [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_asci(Fields f, AsciConfig& c) {
  f.get("target_size", c.target_size);
  f.get("core_size", c.core_size);
  f.get("e_tol", c.e_tol);
  f.get("max_iterations", c.max_iterations);
  f.finish();
}

json asci_json(const AsciConfig& c) {
  return {{"target_size", c.target_size}, {"core_size", c.core_size}, {"e_tol", c.e_tol},
          {"max_iterations", c.max_iterations}};
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  Fields f(j, "");
  std::string s;
  if (f.has("experiment")) {
    f.get("experiment", s);
    c.experiment = parse_experiment(s);
  }
  if (f.has("system")) {
    auto sys = f.sub("system");
    c.system_given = true;
    if (sys.has("fcidump") && sys.has("hubbard")) throw ConfigError("system: give either fcidump or hubbard, not both");
    if (sys.has("fcidump")) {
      std::string path;
      sys.get("fcidump", path);
      c.system.source = SystemSpec::Source::fcidump;
      c.system.fcidump = path;
    } else if (sys.has("hubbard")) {
      c.system.source = SystemSpec::Source::hubbard;
      auto h = sys.sub("hubbard");
      auto& hs = c.system.hubbard;
      h.get("rows", hs.rows);
      h.get("cols", hs.cols);
      h.get("periodic", hs.periodic);
      h.get("t", hs.t);
      h.get("U", hs.U);
      h.get("eps", hs.stagger_eps);
      h.get("n_alpha", hs.n_alpha);
      h.get("n_beta", hs.n_beta);
      if (h.has("orbitals")) {
        h.get("orbitals", s);
        if (s == "site") c.system.orbitals = SystemSpec::Orbitals::site;
        else if (s == "scf") c.system.orbitals = SystemSpec::Orbitals::scf;
        else throw ConfigError("system.hubbard.orbitals must be 'site' or 'scf'");
      }
      h.finish();
    } else {
      c.system_given = false;
    }
    sys.get("frozen_core", c.system.frozen_core);
    sys.finish();
  }
  if (f.has("space")) {
    f.get("space", s);
    if (s == "fci") c.space = Space::fci;
    else if (s == "asci") c.space = Space::asci;
    else throw ConfigError("space must be 'fci' or 'asci'");
  }
  if (f.has("asci")) {
    auto a = f.sub("asci");
    if (a.has("ground")) read_asci(a.sub("ground"), c.asci_ground);
    if (a.has("excited")) read_asci(a.sub("excited"), c.asci_excited);
    a.finish();
  }
  if (f.has("propagation")) {
    auto p = f.sub("propagation");
    p.get("dt", c.propagation.dt);
    p.get("krylov_tol", c.propagation.krylov_tol);
    p.get("krylov_max", c.propagation.krylov_max);
    p.finish();
  }
  if (f.has("schedule")) {
    auto p = f.sub("schedule");
    if (p.has("kind")) {
      p.get("kind", s);
      c.schedule.kind = parse_schedule_kind(s);
    }
    p.get("c", c.schedule.c);
    p.finish();
  }
  if (f.has("initial")) {
    auto p = f.sub("initial");
    if (p.has("kind")) {
      p.get("kind", s);
      c.initial.kind = parse_initial_kind(s);
    }
    p.get("active_orbitals", c.initial.active_orbitals);
    p.finish();
  }
  f.get("total_time", c.total_time);
  if (f.has("critical_time")) {
    auto p = f.sub("critical_time");
    if (p.has("criterion")) {
      p.get("criterion", s);
      c.critical.criterion = parse_criterion(s);
    }
    p.get("overlap_threshold", c.critical.overlap_threshold);
    p.get("energy_threshold", c.critical.energy_threshold);
    p.get("t_cap", c.critical.t_cap);
    p.get("gap_trace", c.gap_trace);
    p.finish();
  }
  if (f.has("study")) {
    auto p = f.sub("study");
    if (p.has("kind")) {
      p.get("kind", s);
      c.study = parse_study_kind(s);
    }
    auto& sp = c.study_params;
    p.get("gap_points", sp.gap_points);
    p.get("dt_values", sp.dt_values);
    p.get("dt_in_full_space", sp.dt_in_full_space);
    p.get("small_core_fraction", sp.small_core_fraction);
    p.get("truncation_every_step", sp.truncation_every_step);
    p.get("truncation_samples", sp.truncation_samples);
    p.finish();
  }
  f.get("eig_tol", c.eig_tol);
  f.get("fci_cap", c.fci_cap);
  if (f.has("output_dir")) {
    f.get("output_dir", s);
    c.output_dir = s;
  }
  f.get("matrix_free", c.matrix_free);
  f.get("trace_stride", c.trace_stride);
  f.get("adiabatic_numerator", c.adiabatic_numerator);
  f.get("seed", c.seed);
  f.get("threads", c.threads);
  f.finish();
  return c;
}

json RunConfig::to_json() const {
  json sys;
  if (system.source == SystemSpec::Source::fcidump) {
    sys["fcidump"] = system.fcidump.string();
  } else {
    const auto& h = system.hubbard;
    sys["hubbard"] = {{"rows", h.rows},       {"cols", h.cols},       {"periodic", h.periodic},
                      {"t", h.t},             {"U", h.U},             {"eps", h.stagger_eps},
                      {"n_alpha", h.n_alpha}, {"n_beta", h.n_beta},
                      {"orbitals", system.orbitals == SystemSpec::Orbitals::scf ? "scf" : "site"}};
  }
  sys["frozen_core"] = system.frozen_core;
  return {{"experiment", to_string(experiment)},
          {"system", sys},
          {"space", space == Space::fci ? "fci" : "asci"},
          {"asci", {{"ground", asci_json(asci_ground)}, {"excited", asci_json(asci_excited)}}},
          {"propagation",
           {{"dt", propagation.dt}, {"krylov_tol", propagation.krylov_tol}, {"krylov_max", propagation.krylov_max}}},
          {"schedule", {{"kind", to_string(schedule.kind)}, {"c", schedule.c}}},
          {"initial", {{"kind", to_string(initial.kind)}, {"active_orbitals", initial.active_orbitals}}},
          {"total_time", total_time},
          {"critical_time",
           {{"criterion", to_string(critical.criterion)},
            {"overlap_threshold", critical.overlap_threshold},
            {"energy_threshold", critical.energy_threshold},
            {"t_cap", critical.t_cap},
            {"gap_trace", gap_trace}}},
          {"study",
           {{"kind", to_string(study)},
            {"gap_points", study_params.gap_points},
            {"dt_values", study_params.dt_values},
            {"dt_in_full_space", study_params.dt_in_full_space},
            {"small_core_fraction", study_params.small_core_fraction},
            {"truncation_every_step", study_params.truncation_every_step},
            {"truncation_samples", study_params.truncation_samples}}},
          {"eig_tol", eig_tol},
          {"fci_cap", fci_cap},
          {"output_dir", output_dir.string()},
          {"matrix_free", matrix_free},
          {"trace_stride", trace_stride},
          {"adiabatic_numerator", adiabatic_numerator},
          {"seed", seed},
          {"threads", threads}};
}

namespace {

void check_asci(const AsciConfig& c, const std::string& name, bool excited, std::vector<std::string>& out) {
  if (excited && c.target_size == 0) return;  // disabled
  if (c.target_size < 1) out.push_back(fmt::format("{}.target_size must be at least 1", name));
  if (c.core_size < 1) out.push_back(fmt::format("{}.core_size must be at least 1", name));
  if (c.core_size > c.target_size) {
    out.push_back(fmt::format("{0}.core_size ({1}) exceeds {0}.target_size ({2})", name, c.core_size, c.target_size));
  }
  if (!(c.e_tol > 0.0)) out.push_back(fmt::format("{}.e_tol must be positive (Hartree)", name));
  if (c.max_iterations < 1) out.push_back(fmt::format("{}.max_iterations must be at least 1", name));
  if (excited && c.target_size < 2) out.push_back(fmt::format("{}.target_size must be at least 2", name));
}

}  // namespace

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> out;
  int n_orb = -1;
  if (!c.system_given) {
    out.push_back("system: give either fcidump or hubbard");
  } else if (c.system.source == SystemSpec::Source::fcidump) {
    if (c.system.fcidump.empty()) out.push_back("system.fcidump: path is empty");
    else if (!std::filesystem::is_regular_file(c.system.fcidump)) {
      out.push_back(fmt::format("system.fcidump: file not found: {}", c.system.fcidump.string()));
    }
  } else {
    const auto& h = c.system.hubbard;
    if (h.rows < 1 || h.cols < 1) out.push_back("system.hubbard.rows and cols must be positive");
    else if (h.rows * h.cols > kMaxOrbitals) out.push_back(fmt::format("system.hubbard: at most {} sites", kMaxOrbitals));
    else {
      n_orb = h.rows * h.cols;
      if (h.periodic && (h.rows == 2 || h.cols == 2)) {
        out.push_back("system.hubbard.periodic: a dimension of length 2 would double a bond");
      }
      if (h.n_alpha < 0 || h.n_alpha > n_orb || h.n_beta < 0 || h.n_beta > n_orb) {
        out.push_back("system.hubbard.n_alpha and n_beta must lie in [0, sites]");
      }
      if (c.system.orbitals == SystemSpec::Orbitals::scf && h.n_alpha != h.n_beta) {
        out.push_back("system.hubbard.orbitals 'scf' needs n_alpha == n_beta");
      }
    }
  }
  if (c.system.frozen_core < 0) out.push_back("system.frozen_core must not be negative");
  if (c.system.frozen_core > 0 && c.system.source == SystemSpec::Source::hubbard) {
    out.push_back("system.frozen_core applies to fcidump systems only");
  }

  const bool uses_asci = c.experiment == Experiment::asci_select || c.experiment == Experiment::study ||
                         c.space == RunConfig::Space::asci;
  if (uses_asci) {
    check_asci(c.asci_ground, "asci.ground", false, out);
    check_asci(c.asci_excited, "asci.excited", true, out);
  }
  if (!(c.propagation.dt > 0.0)) out.push_back("propagation.dt must be positive (a.u.)");
  if (!(c.propagation.krylov_tol > 0.0)) out.push_back("propagation.krylov_tol must be positive");
  if (c.propagation.krylov_max < 1) out.push_back("propagation.krylov_max must be at least 1");
  if (c.schedule.kind == Schedule::Kind::polynomial && !(c.schedule.c > 0.0 && c.schedule.c <= 1.0)) {
    out.push_back("schedule.c must lie in (0, 1]");
  }
  if (c.initial.kind == InitialHamiltonianSpec::Kind::casci_block) {
    if (c.initial.active_orbitals.empty()) out.push_back("initial.active_orbitals is empty for casci_block");
    for (int p : c.initial.active_orbitals) {
      if (p < 0 || (n_orb > 0 && p >= n_orb) || p >= kMaxOrbitals) {
        out.push_back(fmt::format("initial.active_orbitals: orbital {} out of range", p));
      }
    }
    if (c.matrix_free) out.push_back("initial.kind casci_block needs a stored Hamiltonian (matrix_free is set)");
  }
  if (c.experiment == Experiment::evolve && !(c.total_time > 0.0)) out.push_back("total_time must be positive (a.u.)");
  if (c.experiment == Experiment::study && !(c.total_time > 0.0)) out.push_back("total_time must be positive (a.u.)");
  if (c.experiment == Experiment::critical_time) {
    if (!(c.critical.overlap_threshold > 0.0 && c.critical.overlap_threshold <= 1.0)) {
      out.push_back("critical_time.overlap_threshold must lie in (0, 1]");
    }
    if (!(c.critical.energy_threshold > 0.0)) out.push_back("critical_time.energy_threshold must be positive (Hartree)");
    if (!(c.critical.t_cap >= c.propagation.dt)) out.push_back("critical_time.t_cap must be at least propagation.dt");
  }
  if (c.experiment == Experiment::study) {
    const auto& sp = c.study_params;
    if (sp.gap_points < 2) out.push_back("study.gap_points must be at least 2");
    if (sp.dt_values.empty()) out.push_back("study.dt_values is empty");
    for (double dt : sp.dt_values)
      if (!(dt > 0.0)) out.push_back(fmt::format("study.dt_values: {} is not positive", dt));
    if (!(sp.small_core_fraction > 0.0 && sp.small_core_fraction <= 1.0)) {
      out.push_back("study.small_core_fraction must lie in (0, 1]");
    }
    if (sp.truncation_samples < 1) out.push_back("study.truncation_samples must be at least 1");
  }
  if (!(c.eig_tol > 0.0)) out.push_back("eig_tol must be positive (Hartree)");
  if (c.fci_cap < 1) out.push_back("fci_cap must be at least 1");
  if (c.output_dir.empty()) out.push_back("output_dir is empty");
  if (c.trace_stride < 0) out.push_back("trace_stride must not be negative");
  if (c.threads < 0) out.push_back("threads must not be negative");
  return out;
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ASPSIM_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void json_file(const std::string& name, const json& j) {
    std::ofstream f(path(name));
    f << j.dump(2) << '\n';
    check(f, name);
  }
  void trace(const std::string& stem, const EvolutionTrace& t) {
    {
      std::ofstream f(path(stem + ".csv"));
      t.write_csv(f);
      check(f, stem + ".csv");
    }
    json_file(stem + ".json", t.to_json());
  }
  void adopt(const std::vector<std::filesystem::path>& files) {
    for (const auto& p : files) names_.push_back(std::filesystem::relative(p, dir_).string());
  }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path(const std::string& name) {
    names_.push_back(name);
    return dir_ / name;
  }
  void check(const std::ofstream& f, const std::string& name) const {
    if (!f) throw Error("cannot write " + (dir_ / name).string());
  }

  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

Problem build_problem(const RunConfig& c, const IntegralTable& table, std::string& stage) {
  OperatorPolicy policy;
  policy.matrix_free = c.matrix_free;
  EigOptions eig;
  eig.tol = c.eig_tol;
  if (c.space == RunConfig::Space::fci) {
    stage = "build Hamiltonian";
    return make_fci_problem(table, c.initial, c.fci_cap, policy, eig);
  }
  stage = "asci selection";
  auto dets = dynamics_space(table, c.asci_ground, c.asci_excited);
  stage = "build Hamiltonian";
  return make_problem(table, std::move(dets), c.initial, policy, eig);
}

json problem_json(const RunConfig& c, const Problem& p) {
  return {{"system", c.system.id()},
          {"space", c.space == RunConfig::Space::fci ? "fci" : "asci"},
          {"dimension", p.basis()->size()},
          {"ground_energy", p.ground.energy},
          {"initial_overlap", squared_overlap(p.psi0, p.ground.vector)}};
}

json selection_json(const SelectedSpace& s, const IntegralTable& t) {
  const auto ref = hartree_fock_det(t.n_alpha(), t.n_beta(), t.n_orb());
  const auto it = std::lower_bound(s.dets.begin(), s.dets.end(), ref);
  const double c_ref = it != s.dets.end() && *it == ref ? s.coeffs[static_cast<std::size_t>(it - s.dets.begin())] : 0.0;
  return {{"dimension", s.dets.size()},     {"energy", s.energy},
          {"iterations", s.iterations},     {"reference_weight", c_ref * c_ref},
          {"energy_history", s.history},    {"skipped_denominators", s.skipped_denominators}};
}

void run_experiment(const RunConfig& c, Outputs& out, json& result, std::string& stage) {
  stage = "load system";
  const auto table = load_system(c.system);

  switch (c.experiment) {
    case Experiment::evolve: {
      const auto p = build_problem(c, table, stage);
      stage = "evolution";
      TraceOptions opt;
      opt.eigen_stride = c.trace_stride;
      opt.adiabatic_numerator = c.adiabatic_numerator;
      opt.eig.tol = c.eig_tol;
      const auto r = evolve(*p.pair, p.psi0, c.schedule, c.total_time, c.propagation, opt, p.ground.vector);
      const auto& last = r.trace.final_row();
      result = problem_json(c, p);
      result.update({{"total_time", c.total_time},
                     {"dt", c.propagation.dt},
                     {"steps", r.trace.rows.size()},
                     {"final_overlap", last.overlap_target},
                     {"final_energy", last.energy_expect},
                     {"energy_error", last.energy_expect - p.ground.energy},
                     {"final_norm", last.norm},
                     {"max_krylov_dim", r.trace.max_krylov_dim()},
                     {"warnings", r.trace.warnings}});
      stage = "write outputs";
      out.trace("trace", r.trace);
      break;
    }
    case Experiment::critical_time: {
      const auto p = build_problem(c, table, stage);
      stage = "critical-time search";
      CriticalTimeConfig cfg = c.critical;
      cfg.propagation = c.propagation;
      cfg.final_trace.eigen_stride = c.gap_trace ? std::max(1, c.trace_stride) : 0;
      result = problem_json(c, p);
      try {
        const auto r = critical_time(*p.pair, p.psi0, c.schedule, p.ground, cfg);
        result.update(r.to_json());
        stage = "write outputs";
        out.trace("trace", r.final_trace.rows.empty() ? r.passing : r.final_trace);
        out.trace("bracket_passing", r.passing);
        if (!r.failing.rows.empty()) out.trace("bracket_failing", r.failing);
      } catch (const CriterionUnreachable& e) {
        result.update({{"status", "unreachable"}, {"best_value", e.best_value()}, {"t_cap", cfg.t_cap}});
        throw;
      }
      break;
    }
    case Experiment::asci_select: {
      stage = "asci selection";
      const auto g = asci_select(table, c.asci_ground);
      result = {{"system", c.system.id()}, {"ground", selection_json(g, table)}};
      std::vector<Determinant> uni = g.dets;
      std::optional<SelectedSpace> e;
      if (c.asci_excited.target_size > 0) {
        e = asci_select(table, c.asci_excited);
        result["excited"] = selection_json(*e, table);
        uni.insert(uni.end(), e->dets.begin(), e->dets.end());
        std::sort(uni.begin(), uni.end());
        uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
      }
      result["union_dimension"] = uni.size();
      stage = "write outputs";
      g.save(out.dir() / "asci_ground.txt");
      out.adopt({out.dir() / "asci_ground.txt"});
      if (e) {
        e->save(out.dir() / "asci_excited.txt");
        out.adopt({out.dir() / "asci_excited.txt"});
      }
      break;
    }
    case Experiment::study: {
      StudyParams sp = c.study_params;
      sp.total_time = c.total_time;
      sp.schedule = c.schedule;
      sp.propagation = c.propagation;
      sp.initial = c.initial;
      sp.ground = c.asci_ground;
      sp.excited = c.asci_excited;
      sp.excited.root = 1;
      sp.fci_cap = c.fci_cap;
      sp.policy.matrix_free = c.matrix_free;
      sp.eig.tol = c.eig_tol;
      stage = "study " + to_string(c.study);
      const auto report = run_study(c.study, table, c.system.id(), sp);
      stage = "write outputs";
      out.adopt(report.write(out.dir()));
      result = {{"kind", to_string(c.study)}, {"system", c.system.id()}, {"summary", report.summary}};
      break;
    }
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  const auto diagnostics = validate(config);
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics) log << "config: " << d << '\n';
    return kExitConfig;
  }
  const int threads = resolve_threads(config.threads);
  omp_set_num_threads(threads);

  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  std::string stage = "setup";
  int code = kExitOk;
  std::string error;
  json result;
  std::optional<Outputs> out;
  try {
    stage = "write outputs";
    out.emplace(config.output_dir);
    run_experiment(config, *out, result, stage);
  } catch (const ConfigError& e) {
    code = kExitConfig;
    error = e.what();
  } catch (const ParseError& e) {
    code = kExitConfig;
    error = e.what();
  } catch (const ConvergenceError& e) {
    code = kExitConvergence;
    error = e.what();
  } catch (const CriterionUnreachable& e) {
    code = kExitUnreachable;
    error = e.what();
  } catch (const std::exception& e) {
    code = kExitFailure;
    error = e.what();
  }
  if (code != kExitOk) log << stage << ": " << error << '\n';
  if (!out) return code;

  try {
    if (!result.is_null()) out->json_file("result.json", result);
    auto names = out->names();
    names.push_back("manifest.json");
    json manifest{{"software", "aspsim"},
                  {"version", version()},
                  {"experiment", to_string(config.experiment)},
                  {"config", config.to_json()},
                  {"threads", threads},
                  {"started_utc", started},
                  {"finished_utc", utc_now()},
                  {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                  {"exit_code", code},
                  {"files", names}};
    if (code != kExitOk) manifest["error"] = {{"stage", stage}, {"message", error}};
    std::ofstream f(out->dir() / "manifest.json");
    f << manifest.dump(2) << '\n';
    if (!f) throw Error("cannot write manifest.json");
  } catch (const std::exception& e) {
    log << "write outputs: " << e.what() << '\n';
    return code == kExitOk ? kExitFailure : code;
  }
  if (code == kExitOk) log << "wrote " << out->names().size() + 1 << " files to " << config.output_dir.string() << '\n';
  return code;
}

}  // namespace aspsim
