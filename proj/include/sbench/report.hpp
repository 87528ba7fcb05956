// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbench/evaluation.hpp"
#include "sbench/inference_stats.hpp"

namespace sbench {

// Every report below is computed from long-format rows alone, so a saved
// cells CSV is enough to rebuild the whole bundle.

struct PerformanceRow {
  std::string scheme;
  std::string extractor;
  std::string model;
  Summary accuracy;
  Summary sensitivity;  // over replications where it is defined
  Summary specificity;
};

// One row per (scheme, extractor, model) in first-appearance order.
std::vector<PerformanceRow> performance_table(const std::vector<LongRow>& rows);

void write_performance_csv(std::ostream& out, const std::vector<PerformanceRow>& table);
// Blocks per scheme and extractor with ACC/SPE/SEN as "mean ± std" percentages.
void write_performance_text(std::ostream& out, const std::vector<PerformanceRow>& table);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double lower_whisker = 0.0;  // most extreme values inside the 1.5 IQR fences
  double upper_whisker = 0.0;
  std::vector<double> outliers;
};

FiveNumber five_number_summary(std::vector<double> values);

// extractor,model,replication,accuracy for one scheme.
void write_boxplot_data(std::ostream& out, const std::vector<LongRow>& rows,
                        const std::string& scheme);
// extractor,model,n,min,q1,median,q3,max,lower_whisker,upper_whisker,outliers
void write_boxplot_summary(std::ostream& out, const std::vector<LongRow>& rows,
                           const std::string& scheme);

std::vector<std::string> schemes_in(const std::vector<LongRow>& rows);

struct StatsReport {
  std::string scheme;
  AnovaTable anova;
  std::vector<EffectSize> effects;
  std::vector<TukeyComparison> tukey_models;
  std::vector<TukeyComparison> tukey_extractors;
};

// Two-way ANOVA of accuracy in percentage points with models as the first
// factor and extractors as the second, then omega squared and Tukey HSD for
// both factors. Throws DataError when the rows do not form a balanced design
// with at least two replications per cell.
StatsReport analyze_scheme(const std::vector<LongRow>& rows, const std::string& scheme,
                           double alpha = 0.05);

void write_stats_text(std::ostream& out, const StatsReport& report);

}  // namespace sbench
