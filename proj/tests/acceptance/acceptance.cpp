// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

// Acceptance criteria that need no external data: transform and filter
// properties, classifier and statistics oracles, determinism, and the ANOVA
// design arithmetic on a synthetic corpus.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "reporter.hpp"
#include "sbench/classifiers.hpp"
#include "sbench/experiment.hpp"
#include "sbench/inference_stats.hpp"
#include "sbench/random.hpp"
#include "sbench/report.hpp"
#include "sbench/seed.hpp"
#include "sbench/synthetic.hpp"
#include "sbench/wavelet.hpp"

using namespace sbench;
using acceptance::Reporter;

namespace {

constexpr WaveletFamily kFamilies[] = {WaveletFamily::Haar, WaveletFamily::Db2,
                                       WaveletFamily::Db4, WaveletFamily::Coif1};

void wavelet_round_trip(Reporter& r) {
  const auto start = std::chrono::steady_clock::now();
  double worst_rec = 0.0;
  double worst_energy = 0.0;
  for (WaveletFamily family : kFamilies) {
    const auto filter = filter_for(family);
    for (int s = 0; s < 100; ++s) {
      Rng rng(SeedKey(1).add(std::string(to_string(family))).add(static_cast<std::uint64_t>(s)).value());
      std::vector<double> x(4097);
      for (auto& v : x) v = 100.0 * rng.normal();
      const auto sb = wavedec(x, filter, kDefaultLevels, ExtensionMode::Periodized);
      const auto y = waverec(sb, filter);
      double e_in = 0.0;
      double e_out = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        worst_rec = std::max(worst_rec, std::abs(x[i] - y[i]));
        e_in += x[i] * x[i];
      }
      for (const auto& band : sb.bands) {
        for (double c : band) e_out += c * c;
      }
      worst_energy = std::max(worst_energy, std::abs(e_in - e_out) / e_in);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.check("1", "wavelet round trip and Parseval, 4 families x 100 signals x 4097",
          worst_rec < 1e-8 && worst_energy < 1e-8 && seconds < 10.0,
          fmt::format("max reconstruction error {:.2e} (tol 1e-8), max relative energy mismatch "
                      "{:.2e} (tol 1e-8), {:.2f} s (limit 10 s)",
                      worst_rec, worst_energy, seconds));
}

void filter_validity(Reporter& r) {
  double worst = 0.0;
  for (WaveletFamily family : kFamilies) {
    const auto f = filter_for(family);
    const std::size_t n = f.length();
    double sum = 0.0;
    double sq = 0.0;
    for (double c : f.lo_dec) {
      sum += c;
      sq += c * c;
    }
    worst = std::max({worst, std::abs(sum - std::sqrt(2.0)), std::abs(sq - 1.0)});
    for (std::size_t i = 0; i < n; ++i) {
      const double sign = i % 2 == 0 ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(f.hi_dec[i] - sign * f.lo_dec[n - 1 - i]));
    }
    for (std::size_t shift = 2; shift < n; shift += 2) {
      double dot = 0.0;
      for (std::size_t i = 0; i + shift < n; ++i) dot += f.lo_dec[i] * f.lo_dec[i + shift];
      worst = std::max(worst, std::abs(dot));
    }
    for (int m = 0; m < f.vanishing_moments; ++m) {
      double moment = 0.0;
      for (std::size_t i = 0; i < n; ++i) moment += std::pow(static_cast<double>(i), m) * f.hi_dec[i];
      worst = std::max(worst, std::abs(moment));
    }
  }
  r.check("2", "filter validity (sum, norm, QMF, double-shift orthogonality, vanishing moments)",
          worst < 1e-10, fmt::format("max deviation {:.2e} (tol 1e-10)", worst));
}

struct Sample {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Sample noisy_sample(int n, int d, std::uint64_t seed) {
  Rng rng(seed);
  Sample s;
  s.x.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) s.x(i, j) = rng.normal();
    s.y.push_back(s.x(i, 0) - 0.6 * s.x(i, d - 1) + 0.8 * rng.normal() > 0.0 ? 1 : 0);
  }
  return s;
}

double lda_oracle_error(const Sample& s) {
  const auto m = lda_fit(s.x, s.y, 0.0);
  const int n = static_cast<int>(s.x.rows());
  const int d = static_cast<int>(s.x.cols());
  std::vector<Eigen::RowVectorXd> mu(2, Eigen::RowVectorXd::Zero(d));
  std::vector<double> count(2, 0.0);
  for (int i = 0; i < n; ++i) {
    mu[s.y[i]] += s.x.row(i);
    count[s.y[i]] += 1.0;
  }
  for (int k = 0; k < 2; ++k) mu[k] /= count[k];
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Eigen::RowVectorXd c = s.x.row(i) - mu[s.y[i]];
    pooled += c.transpose() * c;
  }
  const Eigen::MatrixXd inv = (pooled / (n - 2.0)).inverse();
  const Eigen::MatrixXd g = m.discriminants(s.x);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 2; ++k) {
      const double expected = (mu[k] * inv * s.x.row(i).transpose())(0) -
                              0.5 * (mu[k] * inv * mu[k].transpose())(0) + std::log(count[k] / n);
      worst = std::max(worst, std::abs(g(i, k) - expected));
    }
  }
  return worst;
}

double qda_oracle_error(const Sample& s) {
  const auto m = qda_fit(s.x, s.y, 0.0);
  const int n = static_cast<int>(s.x.rows());
  const int d = static_cast<int>(s.x.cols());
  const Eigen::MatrixXd g = m.discriminants(s.x);
  double worst = 0.0;
  for (int k = 0; k < 2; ++k) {
    std::vector<int> rows;
    for (int i = 0; i < n; ++i) {
      if (s.y[i] == k) rows.push_back(i);
    }
    const double nk = static_cast<double>(rows.size());
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(d);
    for (int i : rows) mu += s.x.row(i);
    mu /= nk;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int i : rows) cov += (s.x.row(i) - mu).transpose() * (s.x.row(i) - mu);
    cov /= nk - 1.0;
    const Eigen::MatrixXd inv = cov.inverse();
    for (int i = 0; i < n; ++i) {
      const Eigen::RowVectorXd c = s.x.row(i) - mu;
      const double expected = -0.5 * std::log(cov.determinant()) -
                              0.5 * (c * inv * c.transpose())(0) + std::log(nk / n);
      worst = std::max(worst, std::abs(g(i, k) - expected));
    }
  }
  return worst;
}

double nb_oracle_error(const Sample& s) {
  const auto m = naive_bayes_fit(s.x, s.y);
  const int n = static_cast<int>(s.x.rows());
  const int d = static_cast<int>(s.x.cols());
  const Eigen::MatrixXd post = m.posteriors(s.x);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double joint[2];
    for (int k = 0; k < 2; ++k) {
      double count = 0.0;
      std::vector<double> mean(d, 0.0);
      std::vector<double> var(d, 0.0);
      for (int j = 0; j < n; ++j) {
        if (s.y[j] != k) continue;
        count += 1.0;
        for (int c = 0; c < d; ++c) mean[c] += s.x(j, c);
      }
      for (int c = 0; c < d; ++c) mean[c] /= count;
      for (int j = 0; j < n; ++j) {
        if (s.y[j] != k) continue;
        for (int c = 0; c < d; ++c) var[c] += (s.x(j, c) - mean[c]) * (s.x(j, c) - mean[c]);
      }
      double p = count / n;
      for (int c = 0; c < d; ++c) {
        const double v = var[c] / count;
        const double z = s.x(i, c) - mean[c];
        p *= std::exp(-0.5 * z * z / v) / std::sqrt(2.0 * M_PI * v);
      }
      joint[k] = p;
    }
    for (int k = 0; k < 2; ++k) {
      worst = std::max(worst, std::abs(post(i, k) - joint[k] / (joint[0] + joint[1])));
    }
  }
  return worst;
}

int knn_mismatches(const Sample& s, int k) {
  const Sample q = noisy_sample(100, static_cast<int>(s.x.cols()), 404);
  int bad = 0;
  for (Eigen::Index r = 0; r < q.x.rows(); ++r) {
    std::vector<std::pair<double, int>> dist;
    for (Eigen::Index i = 0; i < s.x.rows(); ++i) {
      dist.push_back({(s.x.row(i) - q.x.row(r)).squaredNorm(), s.y[static_cast<std::size_t>(i)]});
    }
    std::sort(dist.begin(), dist.end());
    int ones = 0;
    for (int j = 0; j < k; ++j) ones += dist[static_cast<std::size_t>(j)].second;
    const int expected = 2 * ones > k ? 1 : 0;
    bad += knn_predict(s.x, s.y, q.x.row(r), k) != expected;
  }
  return bad;
}

void classifier_oracles(Reporter& r) {
  const Sample s = noisy_sample(50, 3, 2024);
  const double lda = lda_oracle_error(s);
  const double qda = qda_oracle_error(s);
  const double nb = nb_oracle_error(s);
  const int knn = knn_mismatches(s, 5);

  const Sample big = noisy_sample(50, 3, 77);
  double kkt = 0.0;
  for (Kernel kernel : {Kernel::Rbf, Kernel::Linear, Kernel::Poly}) {
    SvmOptions opt;
    opt.kernel = kernel;
    kkt = std::max(kkt, svm_kkt_violation(svm_fit(big.x, big.y, opt), big.x, big.y));
  }

  const Sample gb_set = noisy_sample(100, 3, 5);
  BoostingOptions gb_opt;
  gb_opt.subsample = 1.0;
  const auto gb = gb_fit(gb_set.x, gb_set.y, gb_opt, 1);
  double worst_rise = 0.0;
  for (std::size_t i = 1; i < gb.loss_trajectory.size(); ++i) {
    worst_rise = std::max(worst_rise, gb.loss_trajectory[i] - gb.loss_trajectory[i - 1]);
  }

  const bool ok = lda < 1e-8 && qda < 1e-8 && nb < 1e-8 && knn == 0 && kkt <= 1e-3 &&
                  worst_rise <= 0.0;
  r.check("9", "classifier oracles",
          ok,
          fmt::format("LDA {:.1e}, QDA {:.1e}, NB {:.1e} (tol 1e-8); KNN mismatches {}/100; "
                      "SVM KKT {:.1e} (tol 1e-3); GB max loss increase {:.1e} (must be <= 0)",
                      lda, qda, nb, knn, kkt, worst_rise));
}

void statistics_oracles(Reporter& r) {
  const std::vector<Observation> toy{
      {"a1", "b1", 1}, {"a1", "b1", 2}, {"a1", "b1", 3},  {"a1", "b2", 4},
      {"a1", "b2", 5}, {"a1", "b2", 6}, {"a2", "b1", 3},  {"a2", "b1", 4},
      {"a2", "b1", 5}, {"a2", "b2", 8}, {"a2", "b2", 10}, {"a2", "b2", 12}};
  const auto t = two_way_anova(toy);
  const double ss_err = std::max({std::abs(t.a.sum_sq - 36.75), std::abs(t.b.sum_sq - 60.75),
                                  std::abs(t.interaction.sum_sq - 6.75),
                                  std::abs(t.residual.sum_sq - 14.0)});

  struct Published {
    int m;
    double df;
    double q;
  };
  // Upper 5% points of the studentized range.
  const Published table[] = {{2, 10, 3.151},         {2, 30, 2.888}, {2, kInfiniteDf, 2.772},
                             {3, 10, 3.877},         {3, 30, 3.486}, {3, kInfiniteDf, 3.314},
                             {5, 10, 4.654},         {5, 30, 4.102}, {5, kInfiniteDf, 3.858}};
  double q_err = 0.0;
  for (const auto& p : table) {
    q_err = std::max(q_err, std::abs(studentized_range_quantile(0.95, p.m, p.df) - p.q));
  }
  r.check("10", "statistics oracles", ss_err < 1e-10 && q_err < 5e-3,
          fmt::format("2x2x3 ANOVA SS error {:.1e} (tol 1e-10); max |q(0.95) - published| "
                      "{:.1e} over m in {{2,3,5}}, df in {{10,30,inf}} (tol 5e-3)",
                      ss_err, q_err));
}

std::string long_csv(const ExperimentResult& result, const std::string& plan) {
  std::ostringstream out;
  write_long_csv(out, result.rows_for(plan));
  return out.str();
}

void determinism(Reporter& r) {
  SynthOptions synth;
  synth.signals_per_set = 40;
  synth.seed = 11;
  const Corpus corpus = synthesize_corpus(synth);
  RunConfig config;
  config.corpus_root = "synthetic";
  config.seed = 99;
  config.kfold = SplitPlan::kfold(5, 2);
  config.holdout = SplitPlan::holdout(0.2, 3);
  config.hyperparams.rf.n_trees = 30;
  config.hyperparams.gb.subsample = 0.8;
  const auto a = run_experiment(config, corpus);
  const auto b = run_experiment(config, corpus);
  const bool same = a.complete() && b.complete() && long_csv(a, "kfold") == long_csv(b, "kfold") &&
                    long_csv(a, "holdout") == long_csv(b, "holdout");
  r.check("11", "determinism of seeded runs", same,
          fmt::format("{} cells x 2 runs on a synthetic corpus, long-format CSVs {}",
                      a.cells.size(), same ? "byte-identical" : "differ"));
}

void anova_design(Reporter& r) {
  SynthOptions synth;
  synth.signals_per_set = 40;
  synth.samples = 1024;
  synth.seed = 12;
  const Corpus corpus = synthesize_corpus(synth);
  RunConfig config;
  config.corpus_root = "synthetic";
  config.schemes = {Scheme::Imbalanced};
  config.kfold.reset();
  config.hyperparams.rf.n_trees = 20;
  config.hyperparams.gb.n_stages = 20;
  const auto result = run_experiment(config, corpus);
  const auto rows = result.rows_for("holdout");
  const auto report = analyze_scheme(rows, "imbalanced");
  const auto& t = report.anova;
  const bool ok = t.a.df == 6 && t.b.df == 4 && t.interaction.df == 24 && t.residual.df == 1715 &&
                  t.observations == 1750;
  r.check("6s", "ANOVA design arithmetic, 7 models x 5 extractors x 50 holdout reps (synthetic corpus)",
          ok,
          fmt::format("df ({}, {}, {}, {}) from {} observations (expected 6, 4, 24, 1715 from 1750)",
                      t.a.df, t.b.df, t.interaction.df, t.residual.df, t.observations));
}

}  // namespace

int main() {
  Reporter r;
  wavelet_round_trip(r);
  filter_validity(r);
  classifier_oracles(r);
  statistics_oracles(r);
  determinism(r);
  anova_design(r);
  return r.exit_code();
}
