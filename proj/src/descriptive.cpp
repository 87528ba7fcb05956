// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbench {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sequence");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double population_variance(std::span<const double> x) {
  const double mu = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - mu) * (v - mu);
  return s / static_cast<double>(x.size());
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sequence");
  q = std::clamp(q, 0.0, 1.0);
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> x, double q) {
  const auto v = sorted_copy(x);
  return quantile_sorted(v, q);
}

}  // namespace sbench
