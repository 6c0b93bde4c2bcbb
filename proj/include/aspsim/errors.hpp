// Copyright 2026 The aspsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aspsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (sector mismatch, bad sizes, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Invalid run or solver configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history = {})
      : Error(what), history_(std::move(history)) {}
  /// Residuals or energies recorded on the way, most recent last.
  [[nodiscard]] const std::vector<double>& history() const noexcept {
    return history_;
  }

 private:
  std::vector<double> history_;
};

/// A preparation criterion could not be met below the configured time cap.
class CriterionUnreachable : public Error {
 public:
  CriterionUnreachable(const std::string& what, double best_value)
      : Error(what), best_value_(best_value) {}
  [[nodiscard]] double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

}  // namespace aspsim
