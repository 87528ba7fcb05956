// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/inference_stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "sbench/error.hpp"

namespace sbench {

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError(
      fmt::format("incomplete beta continued fraction did not converge (a={}, b={}, x={})", a, b,
                  x),
      kMaxIter);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw std::invalid_argument("F distribution needs df > 0");
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

namespace {

std::size_t level_index(std::vector<std::string>& levels, const std::string& name) {
  const auto it = std::find(levels.begin(), levels.end(), name);
  if (it != levels.end()) return static_cast<std::size_t>(it - levels.begin());
  levels.push_back(name);
  return levels.size() - 1;
}

AnovaRow effect_row(std::string term, double df, double ss, double ms_resid, double df_resid) {
  AnovaRow row;
  row.term = std::move(term);
  row.df = df;
  row.sum_sq = ss;
  row.mean_sq = ss / df;
  if (ms_resid > 0.0) {
    row.f = row.mean_sq / ms_resid;
    row.p = f_upper_tail(*row.f, df, df_resid);
  } else {
    row.p = ss > 0.0 ? 0.0 : 1.0;
  }
  return row;
}

}  // namespace

AnovaTable two_way_anova(const std::vector<Observation>& observations, const FactorNames& names) {
  AnovaTable t;
  if (observations.empty()) throw std::invalid_argument("ANOVA needs observations");
  std::vector<std::size_t> ia;
  std::vector<std::size_t> ib;
  for (const auto& o : observations) {
    ia.push_back(level_index(t.levels_a, o.a));
    ib.push_back(level_index(t.levels_b, o.b));
  }
  const auto na = t.levels_a.size();
  const auto nb = t.levels_b.size();
  if (na < 2 || nb < 2) throw std::invalid_argument("each factor needs at least two levels");

  std::vector<double> cell_sum(na * nb, 0.0);
  std::vector<std::size_t> cell_n(na * nb, 0);
  double grand = 0.0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    cell_sum[ia[i] * nb + ib[i]] += observations[i].response;
    ++cell_n[ia[i] * nb + ib[i]];
    grand += observations[i].response;
  }
  const auto r = cell_n.front();
  for (std::size_t c = 0; c < cell_n.size(); ++c) {
    if (cell_n[c] == 0) {
      throw std::invalid_argument(fmt::format("ANOVA cell ({}, {}) is empty",
                                              t.levels_a[c / nb], t.levels_b[c % nb]));
    }
    if (cell_n[c] != r) {
      throw std::invalid_argument("ANOVA requires equal replication in every cell");
    }
  }
  if (r < 2) throw std::invalid_argument("ANOVA needs at least two observations per cell");

  const auto n = observations.size();
  const double rr = static_cast<double>(r);
  grand /= static_cast<double>(n);
  std::vector<double> cell_mean(na * nb);
  for (std::size_t c = 0; c < cell_mean.size(); ++c) cell_mean[c] = cell_sum[c] / rr;
  std::vector<double> mean_a(na, 0.0);
  std::vector<double> mean_b(nb, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      mean_a[i] += cell_mean[i * nb + j] / static_cast<double>(nb);
      mean_b[j] += cell_mean[i * nb + j] / static_cast<double>(na);
    }
  }

  double ss_a = 0.0;
  for (double m : mean_a) ss_a += (m - grand) * (m - grand);
  ss_a *= static_cast<double>(nb) * rr;
  double ss_b = 0.0;
  for (double m : mean_b) ss_b += (m - grand) * (m - grand);
  ss_b *= static_cast<double>(na) * rr;
  double ss_ab = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double e = cell_mean[i * nb + j] - mean_a[i] - mean_b[j] + grand;
      ss_ab += e * e;
    }
  }
  ss_ab *= rr;
  double ss_resid = 0.0;
  double ss_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = observations[i].response;
    const double e = y - cell_mean[ia[i] * nb + ib[i]];
    ss_resid += e * e;
    ss_total += (y - grand) * (y - grand);
  }

  const double df_a = static_cast<double>(na - 1);
  const double df_b = static_cast<double>(nb - 1);
  const double df_resid = static_cast<double>(n - na * nb);
  t.residual.term = "Residuals";
  t.residual.df = df_resid;
  t.residual.sum_sq = ss_resid;
  t.residual.mean_sq = ss_resid / df_resid;
  const double ms = t.residual.mean_sq;
  t.a = effect_row(names.a, df_a, ss_a, ms, df_resid);
  t.b = effect_row(names.b, df_b, ss_b, ms, df_resid);
  t.interaction = effect_row(names.a + ":" + names.b, df_a * df_b, ss_ab, ms, df_resid);
  t.ss_total = ss_total;
  t.observations = n;
  t.per_cell = r;
  return t;
}

std::string to_string(EffectBand band) {
  switch (band) {
    case EffectBand::Negligible: return "negligible";
    case EffectBand::Small: return "small";
    case EffectBand::Medium: return "medium";
    case EffectBand::Large: return "large";
  }
  return "?";
}

EffectBand effect_band(double w) {
  if (w >= 0.14) return EffectBand::Large;
  if (w >= 0.06) return EffectBand::Medium;
  if (w >= 0.01) return EffectBand::Small;
  return EffectBand::Negligible;
}

std::vector<EffectSize> omega_squared(const AnovaTable& table) {
  if (!(table.residual.df > 0.0)) throw std::invalid_argument("omega squared needs residual df");
  const double ms = table.residual.mean_sq;
  std::vector<EffectSize> out;
  for (const AnovaRow* row : {&table.a, &table.b, &table.interaction}) {
    EffectSize e;
    e.term = row->term;
    e.raw = (row->sum_sq - row->df * ms) / (table.ss_total + ms);
    e.omega_squared = std::clamp(e.raw, 0.0, 1.0);
    e.band = effect_band(e.omega_squared);
    out.push_back(e);
  }
  return out;
}

namespace {

constexpr double kInnerTolerance = 1e-11;
constexpr double kOuterTolerance = 1e-8;
constexpr double kAcceptedError = 1e-7;
constexpr unsigned kMaxDepth = 12;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Range distribution of m standard normals.
double range_cdf(double w, int m) {
  if (!(w > 0.0)) return 0.0;
  const auto integrand = [&](double z) {
    const double inside = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(std::max(inside, 0.0), m - 1);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, -8.5, 8.5 + w, kMaxDepth, kInnerTolerance, &error);
  if (error > kAcceptedError) {
    throw ConvergenceError(
        fmt::format("range integral reached only {:.3g} absolute error", error), 0);
  }
  return std::clamp(m * value, 0.0, 1.0);
}

}  // namespace

double studentized_range_cdf(double q, int m, double df) {
  if (m < 2) throw std::invalid_argument("studentized range needs m >= 2");
  if (!(df >= 1.0)) throw std::invalid_argument("studentized range needs df >= 1");
  if (std::isnan(q)) throw std::invalid_argument("studentized range q is NaN");
  if (q <= 0.0) return 0.0;
  if (std::isinf(df) || df > 1e7) return range_cdf(q, m);

  // s = sqrt(chi2_df / df); integrate over the central 1 - 2e-14 of its mass.
  const boost::math::chi_squared chi(df);
  const double lo = std::sqrt(boost::math::quantile(chi, 1e-14) / df);
  const double hi = std::sqrt(boost::math::quantile(boost::math::complement(chi, 1e-14)) / df);
  // Density of s up to a constant, written around s = 1 to avoid cancellation;
  // the constant is recovered by integrating the density itself.
  const auto density = [df](double s) {
    const double t = s - 1.0;
    return std::exp((df - 1.0) * (std::log1p(t) - t) - t - 0.5 * df * t * t);
  };
  const auto integrand = [&](double s) { return density(s) * range_cdf(q * s, m); };
  double error = 0.0;
  double mass_error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, kMaxDepth, kOuterTolerance, &error);
  const double mass = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      density, lo, hi, kMaxDepth, kOuterTolerance, &mass_error);
  const double achieved = (error + mass_error) / mass;
  if (!(achieved <= kAcceptedError)) {
    throw ConvergenceError(
        fmt::format("studentized range integral reached only {:.3g} relative error", achieved),
        0);
  }
  const double value_normalized = value / mass;
  return std::clamp(value_normalized, 0.0, 1.0);
}

double studentized_range_quantile(double p, int m, double df) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile needs p in (0, 1)");
  double hi = 4.0;
  while (studentized_range_cdf(hi, m, df) < p) {
    hi *= 2.0;
    if (hi > 1e4) throw std::runtime_error("studentized range quantile bracket failed");
  }
  const auto f = [&](double q) { return studentized_range_cdf(q, m, df) - p; };
  std::uintmax_t iterations = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, 0.0, hi, -p, f(hi), boost::math::tools::eps_tolerance<double>(40), iterations);
  return 0.5 * (a + b);
}

std::vector<TukeyComparison> tukey_hsd(const std::string& term,
                                       const std::vector<std::string>& levels,
                                       const std::vector<double>& means, double n_per_group,
                                       double ms_resid, double df_resid, double alpha) {
  if (levels.size() < 2) throw std::invalid_argument("Tukey HSD needs at least two levels");
  if (levels.size() != means.size()) throw std::invalid_argument("one mean per level required");
  const int m = static_cast<int>(levels.size());
  const double se = std::sqrt(ms_resid / n_per_group);
  const double q_crit = studentized_range_quantile(1.0 - alpha, m, df_resid);
  std::vector<TukeyComparison> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      TukeyComparison c;
      c.term = term;
      c.level_a = levels[j];
      c.level_b = levels[i];
      c.estimate = means[j] - means[i];
      c.conf_low = c.estimate - q_crit * se;
      c.conf_high = c.estimate + q_crit * se;
      if (se > 0.0) {
        c.adj_p = 1.0 - studentized_range_cdf(std::abs(c.estimate) / se, m, df_resid);
      } else {
        c.adj_p = c.estimate == 0.0 ? 1.0 : 0.0;
      }
      c.adj_p = std::clamp(c.adj_p, 0.0, 1.0);
      out.push_back(c);
    }
  }
  return out;
}

std::vector<TukeyComparison> tukey_hsd(const std::vector<Observation>& observations,
                                       Factor factor, const FactorNames& names, double alpha) {
  const auto table = two_way_anova(observations, names);
  const auto& levels = factor == Factor::A ? table.levels_a : table.levels_b;
  std::vector<double> sums(levels.size(), 0.0);
  std::vector<double> counts(levels.size(), 0.0);
  for (const auto& o : observations) {
    const auto& key = factor == Factor::A ? o.a : o.b;
    const auto i = static_cast<std::size_t>(std::find(levels.begin(), levels.end(), key) -
                                            levels.begin());
    sums[i] += o.response;
    counts[i] += 1.0;
  }
  std::vector<double> means(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) means[i] = sums[i] / counts[i];
  return tukey_hsd(factor == Factor::A ? names.a : names.b, levels, means, counts.front(),
                   table.residual.mean_sq, table.residual.df, alpha);
}

std::optional<TukeyComparison> find_comparison(const std::vector<TukeyComparison>& list,
                                               const std::string& a, const std::string& b) {
  for (const auto& c : list) {
    if (c.level_a == a && c.level_b == b) return c;
    if (c.level_a == b && c.level_b == a) {
      TukeyComparison flipped = c;
      flipped.level_a = a;
      flipped.level_b = b;
      flipped.estimate = -c.estimate;
      flipped.conf_low = -c.conf_high;
      flipped.conf_high = -c.conf_low;
      return flipped;
    }
  }
  return std::nullopt;
}

namespace {

std::string num(double v) { return fmt::format("{}", v); }

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string fixed(double v, int digits) { return fmt::format("{:.{}f}", v, digits); }

std::string pval(const std::optional<double>& p) {
  if (!p) return "";
  if (*p < 1e-4) return fmt::format("{:.2e}", *p);
  return fmt::format("{:.4f}", *p);
}

// First column left-aligned, the rest right-aligned.
void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> width;
  for (const auto& row : table) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : table) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += c == 0 ? fmt::format("{:<{}}", row[c], width[c])
                     : fmt::format("{:>{}}", row[c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace

void write_anova_csv(std::ostream& out, const AnovaTable& table) {
  out << "term,df,sumsq,meansq,statistic,p.value\n";
  for (const AnovaRow* r : table.rows()) {
    out << r->term << ',' << num(r->df) << ',' << num(r->sum_sq) << ',' << num(r->mean_sq) << ','
        << opt_num(r->f) << ',' << opt_num(r->p) << '\n';
  }
}

void write_anova_text(std::ostream& out, const AnovaTable& table) {
  std::vector<std::vector<std::string>> rows{{"term", "df", "sumsq", "meansq", "statistic",
                                              "p.value"}};
  for (const AnovaRow* r : table.rows()) {
    rows.push_back({r->term, fmt::format("{:g}", r->df), fixed(r->sum_sq, 2),
                    fixed(r->mean_sq, 2), r->f ? fixed(*r->f, 2) : "", pval(r->p)});
  }
  write_aligned(out, rows);
}

void write_omega_csv(std::ostream& out, const std::vector<EffectSize>& effects) {
  out << "term,omega_squared,raw,band\n";
  for (const auto& e : effects) {
    out << e.term << ',' << num(e.omega_squared) << ',' << num(e.raw) << ','
        << to_string(e.band) << '\n';
  }
}

void write_omega_text(std::ostream& out, const std::vector<EffectSize>& effects) {
  std::vector<std::vector<std::string>> rows{{"term", "omega2", "band"}};
  for (const auto& e : effects) rows.push_back({e.term, fixed(e.omega_squared, 2), to_string(e.band)});
  write_aligned(out, rows);
}

void write_tukey_csv(std::ostream& out, const std::vector<TukeyComparison>& comparisons) {
  out << "term,comparison,estimate,conf.low,conf.high,adj.p.value\n";
  for (const auto& c : comparisons) {
    out << c.term << ',' << c.comparison() << ',' << num(c.estimate) << ',' << num(c.conf_low)
        << ',' << num(c.conf_high) << ',' << num(c.adj_p) << '\n';
  }
}

void write_tukey_text(std::ostream& out, const std::vector<TukeyComparison>& comparisons) {
  std::vector<std::vector<std::string>> rows{
      {"term", "comparison", "estimate", "conf.low", "conf.high", "adj.p.value"}};
  for (const auto& c : comparisons) {
    rows.push_back({c.term, c.comparison(), fixed(c.estimate, 2), fixed(c.conf_low, 2),
                    fixed(c.conf_high, 2), pval(c.adj_p)});
  }
  write_aligned(out, rows);
}

}  // namespace sbench
