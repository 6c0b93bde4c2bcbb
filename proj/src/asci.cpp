// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/asci.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <omp.h>

#include "aspsim/errors.hpp"

namespace aspsim {

namespace {

constexpr double kMinDenominator = 1e-12;
constexpr const char* kMagic = "aspsim-selected-space";
constexpr int kVersion = 1;

struct Contribution {
  Determinant det;
  double value;
};

// Sorts by determinant and sums duplicates in place.
void reduce(std::vector<Contribution>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.det < b.det; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (out > 0 && v[out - 1].det == v[i].det) v[out - 1].value += v[i].value;
    else v[out++] = v[i];
  }
  v.resize(out);
}

std::vector<Contribution> merge(const std::vector<Contribution>& a, const std::vector<Contribution>& b) {
  std::vector<Contribution> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].det < b[j].det)) out.push_back(a[i++]);
    else if (i == a.size() || b[j].det < a[i].det) out.push_back(b[j++]);
    else out.push_back({a[i].det, a[i++].value + b[j++].value});
  }
  return out;
}

// sum_j H_ij C_j over the core, for every determinant connected to it.
std::vector<Contribution> scatter(const IntegralTable& table, const std::vector<Determinant>& core,
                                  const std::vector<double>& c) {
  constexpr std::size_t kChunk = 2048;
  std::vector<Contribution> acc;
  for (std::size_t begin = 0; begin < core.size(); begin += kChunk) {
    const std::size_t end = std::min(core.size(), begin + kChunk);
    std::vector<std::vector<Contribution>> local(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t j = begin; j < end; ++j) {
      auto& buf = local[static_cast<std::size_t>(omp_get_thread_num())];
      for_each_connection(core[j], table, kDropTolerance,
                          [&](const Determinant& d, double h) { buf.push_back({d, h * c[j]}); });
    }
    std::vector<Contribution> chunk;
    for (auto& l : local) chunk.insert(chunk.end(), l.begin(), l.end());
    reduce(chunk);
    acc = acc.empty() ? std::move(chunk) : merge(acc, chunk);
  }
  return acc;
}

struct Scored {
  Determinant det;
  double score;
};

// Largest |score| first, canonical order among equals.
bool by_score(const Scored& a, const Scored& b) {
  const double x = std::abs(a.score), y = std::abs(b.score);
  return x != y ? x > y : a.det < b.det;
}

std::size_t hash_list(const std::vector<Determinant>& dets) {
  std::size_t h = dets.size();
  for (const auto& d : dets) h = h * 0x100000001b3ULL ^ DeterminantHash{}(d);
  return h;
}

}  // namespace

void AsciConfig::validate() const {
  if (target_size < 1) throw ConfigError("ASCI target size must be at least 1");
  if (core_size < 1 || core_size > target_size) {
    throw ConfigError(fmt::format("ASCI core size {} must lie in [1, target size {}]", core_size, target_size));
  }
  if (!(e_tol > 0.0)) throw ConfigError("ASCI energy tolerance must be positive");
  if (root != 0 && root != 1) throw ConfigError(fmt::format("ASCI root {} must be 0 or 1", root));
  if (root == 1 && target_size < 2) throw ConfigError("excited-root selection needs a target size of at least 2");
  if (max_iterations < 1) throw ConfigError("ASCI needs at least one iteration");
}

std::vector<Determinant> asci_seeds(const IntegralTable& table, int root) {
  const Determinant ref = hartree_fock_det(table.n_alpha(), table.n_beta(), table.n_orb());
  if (root == 0) return {ref};
  std::vector<std::pair<double, Determinant>> pool{{diagonal_element(ref, table), ref}};
  for_each_connected(ref, table.n_orb(),
                     [&](const Determinant& d) { pool.emplace_back(diagonal_element(d, table), d); });
  if (pool.size() < 2) throw UsageError("the determinant space has no excited seed");
  std::partial_sort(pool.begin(), pool.begin() + 2, pool.end());
  const Determinant excited = pool[0].second == ref ? pool[1].second : pool[0].second;
  std::vector<Determinant> seeds{ref, excited};
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

SelectedSpace asci_select(const IntegralTable& table, const AsciConfig& cfg) {
  cfg.validate();
  const auto seeds = asci_seeds(table, cfg.root);
  const Determinant ref = hartree_fock_det(table.n_alpha(), table.n_beta(), table.n_orb());
  const auto n_roots = static_cast<std::size_t>(cfg.root + 1);

  // Every root up to the requested one is tracked so that the lower states
  // stay represented and root ordering in the space is stable.
  std::vector<Determinant> dets = seeds;
  std::vector<std::vector<double>> c(n_roots, std::vector<double>(dets.size(), 0.0));
  std::vector<double> e(n_roots);
  for (std::size_t r = 0; r < n_roots; ++r) {
    const Determinant lead = r == 0 ? ref : (seeds[0] == ref ? seeds[1] : seeds[0]);
    c[r][std::find(dets.begin(), dets.end(), lead) - dets.begin()] = 1.0;
    e[r] = diagonal_element(lead, table);
  }
  auto weight = [&](std::size_t i) {
    double w = 0.0;
    for (const auto& v : c) w = std::max(w, std::abs(v[i]));
    return w;
  };

  SelectedSpace best;
  best.n_orb = table.n_orb();
  std::vector<double> history{e[cfg.root]};
  std::vector<std::size_t> seen;  // hashes of earlier determinant lists
  std::size_t skipped_total = 0;
  auto snapshot = [&](int iter) {
    best.dets = dets;
    best.coeffs = c[cfg.root];
    best.energy = e[cfg.root];
    best.iterations = iter;
  };
  auto finish = [&] {
    best.history = history;
    best.skipped_denominators = skipped_total;
    return best;
  };
  snapshot(0);

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t n_core = std::min(cfg.core_size, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_core), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return by_score({dets[a], weight(a)}, {dets[b], weight(b)});
                      });
    std::vector<Determinant> core(n_core);
    for (std::size_t k = 0; k < n_core; ++k) core[k] = dets[order[k]];

    std::vector<Scored> pool;
    for (std::size_t i = 0; i < dets.size(); ++i) pool.push_back({dets[i], weight(i)});
    std::vector<Scored> fresh;
    for (std::size_t r = 0; r < n_roots; ++r) {
      std::vector<double> core_c(n_core);
      for (std::size_t k = 0; k < n_core; ++k) core_c[k] = c[r][order[k]];
      const auto acc = scatter(table, core, core_c);
      std::vector<Scored> scored(acc.size(), {Determinant{}, -1.0});
      std::size_t skipped = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : skipped)
      for (std::size_t i = 0; i < acc.size(); ++i) {
        if (std::binary_search(dets.begin(), dets.end(), acc[i].det)) continue;
        const double denom = diagonal_element(acc[i].det, table) - e[r];
        if (std::abs(denom) < kMinDenominator) {
          ++skipped;
          continue;
        }
        scored[i] = {acc[i].det, std::abs(acc[i].value / denom)};
      }
      skipped_total += skipped;
      // both lists are sorted by determinant; keep the larger score
      std::vector<Scored> merged;
      merged.reserve(fresh.size() + scored.size());
      std::size_t a = 0, b = 0;
      while (a < fresh.size() || b < scored.size()) {
        if (b < scored.size() && scored[b].score < 0) {
          ++b;
        } else if (b == scored.size() || (a < fresh.size() && fresh[a].det < scored[b].det)) {
          merged.push_back(fresh[a++]);
        } else if (a == fresh.size() || scored[b].det < fresh[a].det) {
          merged.push_back(scored[b++]);
        } else {
          merged.push_back({fresh[a].det, std::max(fresh[a].score, scored[b].score)});
          ++a;
          ++b;
        }
      }
      fresh = std::move(merged);
    }
    pool.insert(pool.end(), fresh.begin(), fresh.end());

    // Seeds first, then the best-scoring rest.
    std::vector<Determinant> next(seeds);
    auto rest_end = std::remove_if(pool.begin(), pool.end(), [&](const Scored& x) {
      return std::find(seeds.begin(), seeds.end(), x.det) != seeds.end();
    });
    const std::size_t n_rest = std::min<std::size_t>(cfg.target_size - std::min(cfg.target_size, seeds.size()),
                                                     static_cast<std::size_t>(rest_end - pool.begin()));
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_rest), rest_end, by_score);
    for (std::size_t k = 0; k < n_rest; ++k) next.push_back(pool[k].det);
    std::sort(next.begin(), next.end());

    // Warm start from the previous roots, carried over to the new list.
    EigOptions eo = cfg.eig;
    eo.seeds.assign(n_roots, std::vector<double>(next.size(), 0.0));
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const auto it = std::lower_bound(next.begin(), next.end(), dets[i]);
      if (it == next.end() || *it != dets[i]) continue;
      for (std::size_t r = 0; r < n_roots; ++r) eo.seeds[r][it - next.begin()] = c[r][i];
    }
    auto basis = std::make_shared<const Basis>(std::move(next));
    const auto pairs = lowest_eigenpairs(assemble(basis, table), cfg.root + 1, eo);

    const double previous = e[cfg.root];
    dets = *basis;
    for (std::size_t r = 0; r < n_roots; ++r) {
      c[r] = pairs[r].vector;
      e[r] = pairs[r].value;
    }
    history.push_back(e[cfg.root]);
    if (iter == 1 || e[cfg.root] < best.energy) snapshot(iter);
    if (std::abs(e[cfg.root] - previous) < cfg.e_tol) {
      snapshot(iter);
      return finish();
    }
    // A repeated list means the selection is periodic from here on; the
    // lowest energy visited is the best variational answer it will give.
    const std::size_t h = hash_list(dets);
    if (std::find(seen.begin(), seen.end(), h) != seen.end()) return finish();
    seen.push_back(h);
  }
  throw ConvergenceError(fmt::format("ASCI root {} energy not converged to {:.1e} in {} iterations", cfg.root,
                                     cfg.e_tol, cfg.max_iterations),
                         history);
}

std::vector<Determinant> dynamics_space(const IntegralTable& table, const AsciConfig& ground,
                                        const AsciConfig& excited) {
  std::vector<Determinant> out;
  for (const auto* cfg : {&ground, &excited}) {
    if (cfg->target_size == 0) continue;
    const auto s = asci_select(table, *cfg);
    out.insert(out.end(), s.dets.begin(), s.dets.end());
  }
  if (out.empty()) throw ConfigError("both ASCI selections are disabled");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SelectedSpace::save(const std::filesystem::path& path) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << kMagic << ' ' << kVersion << '\n'
    << "n_orb " << n_orb << '\n'
    << std::setprecision(17) << "energy " << energy << '\n'
    << "iterations " << iterations << '\n'
    << "dets " << dets.size() << '\n';
  for (std::size_t i = 0; i < dets.size(); ++i) f << to_string(dets[i], n_orb) << ' ' << coeffs[i] << '\n';
  if (!f) throw Error("write failed for " + path.string());
}

SelectedSpace SelectedSpace::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path.string(), 0);
  auto fail = [&](const std::string& why) { return ParseError(path.string() + ": " + why, 0); };
  std::string magic, key;
  int version = 0;
  if (!(f >> magic >> version) || magic != kMagic) throw fail("not a selected-space file");
  if (version != kVersion) throw fail(fmt::format("unsupported version {}", version));
  SelectedSpace s;
  std::size_t n = 0;
  if (!(f >> key >> s.n_orb) || key != "n_orb") throw fail("expected n_orb");
  if (!(f >> key >> s.energy) || key != "energy") throw fail("expected energy");
  if (!(f >> key >> s.iterations) || key != "iterations") throw fail("expected iterations");
  if (!(f >> key >> n) || key != "dets") throw fail("expected dets");
  s.dets.resize(n);
  s.coeffs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    if (!(f >> text >> s.coeffs[i])) throw fail(fmt::format("truncated at determinant {}", i));
    s.dets[i] = parse_determinant(text);
  }
  if (!std::is_sorted(s.dets.begin(), s.dets.end()) ||
      std::adjacent_find(s.dets.begin(), s.dets.end()) != s.dets.end()) {
    throw fail("determinants not in canonical order");
  }
  return s;
}

}  // namespace aspsim
