// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <stdexcept>
#include <string>

namespace sbench {

// Malformed or inconsistent run configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data (corpus files, CSV inputs). Exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, long iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

// A benchmark cell failed; carries the cell identity. Exit code 3.
class CellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sbench
