// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "aspsim/fcidump.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aspsim/determinant.hpp"
#include "aspsim/errors.hpp"

namespace aspsim {

namespace {

constexpr double kDuplicateTolerance = 1e-12;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::optional<long> parse_int(const std::string& tok) {
  long v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> parse_real(std::string tok) {
  std::replace_if(tok.begin(), tok.end(), [](char c) { return c == 'D' || c == 'd'; }, 'e');
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct Header {
  std::map<std::string, std::vector<std::string>> fields;
  std::size_t last_line = 0;
};

Header read_header(std::istream& in) {
  Header hdr;
  std::string line;
  std::string text;
  std::size_t lineno = 0;
  bool started = false;
  bool finished = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string u = upper(line);
    if (!started) {
      const auto pos = u.find("&FCI");
      if (pos == std::string::npos) {
        if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
        throw ParseError("FCIDUMP header must start with &FCI", lineno);
      }
      started = true;
      u = u.substr(pos + 4);
    }
    const auto end_pos = std::min(u.find("&END"), u.find('/'));
    if (end_pos != std::string::npos) {
      text += ' ' + u.substr(0, end_pos);
      finished = true;
      break;
    }
    text += ' ' + u;
  }
  if (!started) throw ParseError("empty FCIDUMP stream", lineno);
  if (!finished) throw ParseError("FCIDUMP header is not terminated by &END or /", lineno);
  hdr.last_line = lineno;

  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream ss(text);
  std::string tok;
  std::string key;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      key = tok.substr(0, eq);
      if (key.empty()) throw ParseError("malformed FCIDUMP header entry '" + tok + "'", lineno);
      hdr.fields[key];
      const std::string rest = tok.substr(eq + 1);
      if (!rest.empty()) hdr.fields[key].push_back(rest);
    } else if (tok == "=") {
      if (key.empty()) throw ParseError("malformed FCIDUMP header", lineno);
    } else {
      if (key.empty()) throw ParseError("FCIDUMP header value without key: '" + tok + "'", lineno);
      hdr.fields[key].push_back(tok);
    }
  }
  return hdr;
}

long header_int(const Header& hdr, const std::string& key, std::optional<long> fallback) {
  const auto it = hdr.fields.find(key);
  if (it == hdr.fields.end() || it->second.empty()) {
    if (fallback) return *fallback;
    throw ParseError("FCIDUMP header lacks " + key, hdr.last_line);
  }
  const auto v = parse_int(it->second.front());
  if (!v) throw ParseError("FCIDUMP header " + key + " is not an integer", hdr.last_line);
  return *v;
}

}  // namespace

IntegralTable read_fcidump(std::istream& in) {
  const Header hdr = read_header(in);
  const long norb = header_int(hdr, "NORB", std::nullopt);
  const long nelec = header_int(hdr, "NELEC", std::nullopt);
  const long ms2 = header_int(hdr, "MS2", 0L);
  if (norb <= 0 || norb > kMaxOrbitals) {
    throw ParseError(fmt::format("NORB={} outside [1, {}]", norb, kMaxOrbitals), hdr.last_line);
  }
  if (nelec < 0 || (nelec + ms2) % 2 != 0 || std::abs(ms2) > nelec) {
    throw ParseError(fmt::format("inconsistent NELEC={} MS2={}", nelec, ms2), hdr.last_line);
  }
  const long na = (nelec + ms2) / 2;
  const long nb = (nelec - ms2) / 2;
  if (na > norb || nb > norb) {
    throw ParseError(fmt::format("NELEC={} does not fit in NORB={}", nelec, norb), hdr.last_line);
  }

  const int n = static_cast<int>(norb);
  IntegralTable table(n, static_cast<int>(na), static_cast<int>(nb));
  std::vector<char> seen_v(table.eri_size(), 0);
  std::vector<char> seen_h(static_cast<std::size_t>(n * n), 0);
  bool seen_core = false;

  std::string line;
  std::size_t lineno = hdr.last_line;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 5) {
      throw ParseError(fmt::format("expected 'value i j k l', got {} fields", toks.size()),
                       lineno);
    }
    const auto value = parse_real(toks[0]);
    if (!value || !std::isfinite(*value)) throw ParseError("integral value is not a finite number", lineno);
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      const auto v = parse_int(toks[static_cast<std::size_t>(k) + 1]);
      if (!v) throw ParseError("index '" + toks[static_cast<std::size_t>(k) + 1] + "' is not an integer", lineno);
      if (*v < 0 || *v > norb) {
        throw ParseError(fmt::format("index {} out of range [0, {}]", *v, norb), lineno);
      }
      idx[static_cast<std::size_t>(k)] = static_cast<int>(*v);
    }
    const auto [i, j, k, l] = idx;

    auto check_dup = [&](char& seen, double old) {
      if (seen && std::abs(old - *value) > kDuplicateTolerance) {
        throw ParseError(fmt::format("duplicate entry contradicts earlier value {:.17g}", old),
                         lineno);
      }
      seen = 1;
    };

    if (i == 0 && j == 0 && k == 0 && l == 0) {
      char s = seen_core ? 1 : 0;
      check_dup(s, table.e_core());
      seen_core = true;
      table.set_e_core(*value);
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      auto& s = seen_h[static_cast<std::size_t>(std::min(i, j) - 1) * n + (std::max(i, j) - 1)];
      check_dup(s, table.h(i - 1, j - 1));
      table.set_h(i - 1, j - 1, *value);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      continue;  // orbital energy
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      auto& s = seen_v[table.eri_index(i - 1, j - 1, k - 1, l - 1)];
      check_dup(s, table.v(i - 1, j - 1, k - 1, l - 1));
      table.set_v(i - 1, j - 1, k - 1, l - 1, *value);
    } else {
      throw ParseError(fmt::format("unrecognized index pattern {} {} {} {}", i, j, k, l), lineno);
    }
  }
  return table;
}

IntegralTable read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open FCIDUMP " + path.string(), 0);
  return read_fcidump(in);
}

void write_fcidump(std::ostream& out, const IntegralTable& t) {
  const int n = t.n_orb();
  fmt::print(out, " &FCI NORB={},NELEC={},MS2={},\n  ORBSYM=", n, t.n_alpha() + t.n_beta(),
             t.n_alpha() - t.n_beta());
  for (int p = 0; p < n; ++p) fmt::print(out, "1,");
  fmt::print(out, "\n  ISYM=1,\n &END\n");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= (r == p ? q : r); ++s) {
          const double v = t.v(p, q, r, s);
          if (v != 0.0) fmt::print(out, "{:25.16e} {:3d} {:3d} {:3d} {:3d}\n", v, p + 1, q + 1, r + 1, s + 1);
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) {
      const double v = t.h(p, q);
      if (v != 0.0) fmt::print(out, "{:25.16e} {:3d} {:3d} {:3d} {:3d}\n", v, p + 1, q + 1, 0, 0);
    }
  fmt::print(out, "{:25.16e} {:3d} {:3d} {:3d} {:3d}\n", t.e_core(), 0, 0, 0, 0);
}

void write_fcidump(const std::filesystem::path& path, const IntegralTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write FCIDUMP " + path.string());
  write_fcidump(out, table);
}

}  // namespace aspsim
