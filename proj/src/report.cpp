// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/report.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "sbench/descriptive.hpp"
#include "sbench/error.hpp"

namespace sbench {

namespace {

using CellKey = std::tuple<std::string, std::string, std::string>;

struct Grouped {
  std::vector<CellKey> order;
  std::map<CellKey, std::vector<const LongRow*>> rows;
};

Grouped group_rows(const std::vector<LongRow>& rows, const std::string* scheme = nullptr) {
  Grouped g;
  for (const auto& r : rows) {
    if (scheme && r.scheme != *scheme) continue;
    CellKey key{r.scheme, r.extractor, r.model};
    auto [it, inserted] = g.rows.try_emplace(key);
    if (inserted) g.order.push_back(key);
    it->second.push_back(&r);
  }
  return g;
}

std::string pct(const Summary& s) {
  if (s.count == 0) return "NA";
  return fmt::format("{:.2f} ± {:.2f}", 100.0 * s.mean, 100.0 * s.stdev);
}

}  // namespace

std::vector<PerformanceRow> performance_table(const std::vector<LongRow>& rows) {
  const auto g = group_rows(rows);
  std::vector<PerformanceRow> out;
  for (const auto& key : g.order) {
    std::vector<double> acc;
    std::vector<double> sen;
    std::vector<double> spe;
    for (const LongRow* r : g.rows.at(key)) {
      acc.push_back(r->accuracy);
      if (r->sensitivity) sen.push_back(*r->sensitivity);
      if (r->specificity) spe.push_back(*r->specificity);
    }
    PerformanceRow row;
    std::tie(row.scheme, row.extractor, row.model) = key;
    row.accuracy = summarize(acc);
    row.sensitivity = summarize(sen);
    row.specificity = summarize(spe);
    out.push_back(std::move(row));
  }
  return out;
}

void write_performance_csv(std::ostream& out, const std::vector<PerformanceRow>& table) {
  out << "scheme,extractor,model,replications,accuracy_mean,accuracy_std,specificity_mean,"
         "specificity_std,sensitivity_mean,sensitivity_std\n";
  const auto stat = [](const Summary& s, bool mean) {
    return s.count == 0 ? std::string() : format_double(mean ? s.mean : s.stdev);
  };
  for (const auto& r : table) {
    out << r.scheme << ',' << r.extractor << ',' << r.model << ',' << r.accuracy.count << ','
        << stat(r.accuracy, true) << ',' << stat(r.accuracy, false) << ','
        << stat(r.specificity, true) << ',' << stat(r.specificity, false) << ','
        << stat(r.sensitivity, true) << ',' << stat(r.sensitivity, false) << '\n';
  }
}

void write_performance_text(std::ostream& out, const std::vector<PerformanceRow>& table) {
  std::string current;
  for (const auto& r : table) {
    const std::string block = r.scheme + " / " + r.extractor;
    if (block != current) {
      if (!current.empty()) out << '\n';
      current = block;
      out << fmt::format("{}\n{:<6} {:>16} {:>16} {:>16}\n", block, "Model", "ACC (%)",
                         "SPE (%)", "SEN (%)");
    }
    out << fmt::format("{:<6} {:>16} {:>16} {:>16}\n", r.model, pct(r.accuracy),
                       pct(r.specificity), pct(r.sensitivity));
  }
}

FiveNumber five_number_summary(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("five-number summary of no values");
  std::sort(values.begin(), values.end());
  FiveNumber f;
  f.min = values.front();
  f.max = values.back();
  f.q1 = quantile_sorted(values, 0.25);
  f.median = quantile_sorted(values, 0.5);
  f.q3 = quantile_sorted(values, 0.75);
  const double iqr = f.q3 - f.q1;
  const double lo_fence = f.q1 - 1.5 * iqr;
  const double hi_fence = f.q3 + 1.5 * iqr;
  f.lower_whisker = f.max;
  f.upper_whisker = f.min;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      f.outliers.push_back(v);
      continue;
    }
    f.lower_whisker = std::min(f.lower_whisker, v);
    f.upper_whisker = std::max(f.upper_whisker, v);
  }
  return f;
}

void write_boxplot_data(std::ostream& out, const std::vector<LongRow>& rows,
                        const std::string& scheme) {
  out << "extractor,model,replication,accuracy\n";
  for (const auto& r : rows) {
    if (r.scheme != scheme) continue;
    out << r.extractor << ',' << r.model << ',' << r.replication << ','
        << format_double(r.accuracy) << '\n';
  }
}

void write_boxplot_summary(std::ostream& out, const std::vector<LongRow>& rows,
                           const std::string& scheme) {
  out << "extractor,model,n,min,q1,median,q3,max,lower_whisker,upper_whisker,outliers\n";
  const auto g = group_rows(rows, &scheme);
  for (const auto& key : g.order) {
    std::vector<double> acc;
    for (const LongRow* r : g.rows.at(key)) acc.push_back(r->accuracy);
    const auto f = five_number_summary(acc);
    std::string outliers;
    for (double v : f.outliers) {
      if (!outliers.empty()) outliers += ';';
      outliers += format_double(v);
    }
    out << std::get<1>(key) << ',' << std::get<2>(key) << ',' << acc.size() << ','
        << format_double(f.min) << ',' << format_double(f.q1) << ','
        << format_double(f.median) << ',' << format_double(f.q3) << ','
        << format_double(f.max) << ',' << format_double(f.lower_whisker) << ','
        << format_double(f.upper_whisker) << ',' << outliers << '\n';
  }
}

std::vector<std::string> schemes_in(const std::vector<LongRow>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.scheme) == out.end()) out.push_back(r.scheme);
  }
  return out;
}

StatsReport analyze_scheme(const std::vector<LongRow>& rows, const std::string& scheme,
                           double alpha) {
  std::vector<Observation> obs;
  for (const auto& r : rows) {
    if (r.scheme == scheme) obs.push_back({r.model, r.extractor, 100.0 * r.accuracy});
  }
  if (obs.empty()) throw DataError(fmt::format("no rows for scheme '{}'", scheme));
  StatsReport report;
  report.scheme = scheme;
  try {
    report.anova = two_way_anova(obs);
    report.effects = omega_squared(report.anova);
    if (report.anova.levels_a.size() >= 2) report.tukey_models = tukey_hsd(obs, Factor::A, {}, alpha);
    if (report.anova.levels_b.size() >= 2) {
      report.tukey_extractors = tukey_hsd(obs, Factor::B, {}, alpha);
    }
  } catch (const std::invalid_argument& e) {
    throw DataError(fmt::format("scheme '{}': {}", scheme, e.what()));
  }
  return report;
}

void write_stats_text(std::ostream& out, const StatsReport& report) {
  out << fmt::format("== {} ({} observations, {} per cell)\n\nTwo-way ANOVA\n", report.scheme,
                     report.anova.observations, report.anova.per_cell);
  write_anova_text(out, report.anova);
  out << "\nOmega squared\n";
  write_omega_text(out, report.effects);
  if (!report.tukey_models.empty()) {
    out << "\nTukey HSD: Models\n";
    write_tukey_text(out, report.tukey_models);
  }
  if (!report.tukey_extractors.empty()) {
    out << "\nTukey HSD: feat_extr\n";
    write_tukey_text(out, report.tukey_extractors);
  }
}

}  // namespace sbench
