// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <iostream>
#include <string>

#include <fmt/format.h>

namespace sbench::acceptance {

// One PASS/FAIL line per criterion.
class Reporter {
 public:
  void check(const std::string& id, const std::string& title, bool ok, const std::string& detail) {
    std::cout << fmt::format("{} [{}] {}: {}\n", ok ? "PASS" : "FAIL", id, title, detail)
              << std::flush;
    ok ? ++passed_ : ++failed_;
  }

  void not_evaluated(const std::string& id, const std::string& title, const std::string& why) {
    std::cout << fmt::format("NOT EVALUATED [{}] {}: {}\n", id, title, why) << std::flush;
  }

  int exit_code() const {
    std::cout << fmt::format("{} passed, {} failed\n", passed_, failed_);
    return failed_ == 0 ? 0 : 1;
  }

 private:
  int passed_ = 0;
  int failed_ = 0;
};

}  // namespace sbench::acceptance
