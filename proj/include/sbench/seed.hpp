// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace sbench {

// Seed derivation. A master seed plus a list of string/integer keys is folded
// through FNV-1a and finalized with splitmix64, so every (cell, replication)
// gets an independent, platform-stable stream seed.
class SeedKey {
 public:
  explicit SeedKey(std::uint64_t master) : state_(mix(master ^ 0x9e3779b97f4a7c15ULL)) {}

  SeedKey& add(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    state_ = mix(state_ ^ h);
    return *this;
  }

  SeedKey& add(std::uint64_t v) {
    state_ = mix(state_ ^ mix(v + 0x632be59bd9b4e019ULL));
    return *this;
  }

  std::uint64_t value() const { return state_; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace sbench
