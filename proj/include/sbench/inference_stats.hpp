// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sbench {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

// P(F > f) for an F(d1, d2) variate.
double f_upper_tail(double f, double d1, double d2);

struct Observation {
  std::string a;  // level of the first factor
  std::string b;  // level of the second factor
  double response = 0.0;
};

struct AnovaRow {
  std::string term;
  double df = 0.0;
  double sum_sq = 0.0;
  double mean_sq = 0.0;
  std::optional<double> f;  // empty when undefined
  std::optional<double> p;  // empty on the residual row
};

struct AnovaTable {
  AnovaRow a;
  AnovaRow b;
  AnovaRow interaction;
  AnovaRow residual;
  double ss_total = 0.0;
  std::size_t observations = 0;
  std::size_t per_cell = 0;
  std::vector<std::string> levels_a;  // first-appearance order
  std::vector<std::string> levels_b;

  std::vector<const AnovaRow*> rows() const { return {&a, &b, &interaction, &residual}; }
};

struct FactorNames {
  std::string a = "Models";
  std::string b = "feat_extr";
};

// Balanced two-way ANOVA with interaction. Throws std::invalid_argument when
// a cell is empty, cells are unequal in size, or a cell has one observation.
// With a zero residual mean square F is left empty and p is 1 (0 when the
// effect itself has a positive sum of squares).
AnovaTable two_way_anova(const std::vector<Observation>& observations,
                         const FactorNames& names = {});

enum class EffectBand { Negligible, Small, Medium, Large };

std::string to_string(EffectBand band);
// 0.01 small, 0.06 medium, 0.14 large.
EffectBand effect_band(double omega_squared);

struct EffectSize {
  std::string term;
  double omega_squared = 0.0;  // clamped at 0
  double raw = 0.0;            // before clamping
  EffectBand band = EffectBand::Negligible;
};

// (SS_e - df_e MS_resid) / (SS_total + MS_resid) for the two main effects and
// the interaction.
std::vector<EffectSize> omega_squared(const AnovaTable& table);

// P(Q <= q) for the studentized range of m means with df degrees of freedom.
// df may be infinity. Nested adaptive Gauss-Kronrod quadrature; throws
// ConvergenceError when the requested accuracy is not reached.
double studentized_range_cdf(double q, int m, double df);

double studentized_range_quantile(double p, int m, double df);

inline constexpr double kInfiniteDf = std::numeric_limits<double>::infinity();

struct TukeyComparison {
  std::string term;
  std::string level_a;  // reported as "level_a-level_b"
  std::string level_b;
  double estimate = 0.0;  // mean(level_a) - mean(level_b)
  double conf_low = 0.0;
  double conf_high = 0.0;
  double adj_p = 1.0;

  std::string comparison() const { return level_a + "-" + level_b; }
};

enum class Factor { A, B };

// All pairs of levels j > i named "level_j-level_i", levels in first-appearance
// order. Residual mean square and df come from the full two-way model.
std::vector<TukeyComparison> tukey_hsd(const std::vector<Observation>& observations,
                                       Factor factor, const FactorNames& names = {},
                                       double alpha = 0.05);

// The same from summary statistics of equal-size groups.
std::vector<TukeyComparison> tukey_hsd(const std::string& term,
                                       const std::vector<std::string>& levels,
                                       const std::vector<double>& means, double n_per_group,
                                       double ms_resid, double df_resid, double alpha = 0.05);

// Finds "a-b" in either orientation; a reversed match is flipped so the
// estimate reads mean(a) - mean(b).
std::optional<TukeyComparison> find_comparison(const std::vector<TukeyComparison>& list,
                                               const std::string& a, const std::string& b);

void write_anova_csv(std::ostream& out, const AnovaTable& table);
void write_anova_text(std::ostream& out, const AnovaTable& table);
void write_omega_csv(std::ostream& out, const std::vector<EffectSize>& effects);
void write_omega_text(std::ostream& out, const std::vector<EffectSize>& effects);
void write_tukey_csv(std::ostream& out, const std::vector<TukeyComparison>& comparisons);
void write_tukey_text(std::ostream& out, const std::vector<TukeyComparison>& comparisons);

}  // namespace sbench
