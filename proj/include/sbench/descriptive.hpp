// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <span>
#include <vector>

namespace sbench {

double mean(std::span<const double> x);

// Population variance, sum (x - mean)^2 / n.
double population_variance(std::span<const double> x);

// Empirical quantile with linear interpolation between order statistics at
// position q * (n - 1). q is clamped to [0, 1].
double quantile(std::span<const double> x, double q);
double quantile_sorted(std::span<const double> sorted, double q);

inline double median(std::span<const double> x) { return quantile(x, 0.5); }

std::vector<double> sorted_copy(std::span<const double> x);

}  // namespace sbench
