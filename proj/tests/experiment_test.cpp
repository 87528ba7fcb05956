// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <json.hpp>

#include "sbench/experiment.hpp"
#include "sbench/report.hpp"
#include "sbench/synthetic.hpp"

namespace sbench {
namespace {

namespace fs = std::filesystem;

const Corpus& small_corpus() {
  static const Corpus corpus = [] {
    SynthOptions opts;
    opts.signals_per_set = 20;
    opts.samples = 1024;
    opts.seed = 3;
    return synthesize_corpus(opts);
  }();
  return corpus;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Experiment : public ::testing::Test {
 protected:
  void SetUp() override {
    static int counter = 0;
    dir_ = fs::temp_directory_path() / fmt::format("sbench_exp_{}_{}", ::getpid(), counter++);
    fs::create_directories(dir_);
    config_.corpus_root = dir_;
    config_.output_dir = dir_ / "out";
    config_.extractors = {Extractor::Db4, Extractor::Mfcc};
    config_.models = {ModelKind::Lda, ModelKind::Nb, ModelKind::Rf};
    config_.kfold = SplitPlan::kfold(5, 2);
    config_.holdout = SplitPlan::holdout(0.2, 4);
    config_.hyperparams.rf.n_trees = 15;
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
  RunConfig config_;
};

TEST_F(Experiment, SubsetConfigProducesExactlyThoseCells) {
  config_.schemes = {Scheme::Balanced};
  config_.extractors = {Extractor::Coif1};
  config_.models = {ModelKind::Knn, ModelKind::Gb};
  config_.holdout.reset();
  config_.hyperparams.gb.n_stages = 10;
  const auto result = run_experiment(config_, small_corpus());
  ASSERT_TRUE(result.complete());
  EXPECT_EQ(result.cells.size(), 2u);
  std::set<std::string> seen;
  for (const auto& r : result.rows_for("kfold")) {
    EXPECT_EQ(r.scheme, "balanced");
    EXPECT_EQ(r.extractor, "coif1");
    seen.insert(r.model);
  }
  EXPECT_EQ(seen, (std::set<std::string>{"KNN", "GB"}));
  EXPECT_TRUE(result.rows_for("holdout").empty());
}

TEST_F(Experiment, DeterministicAcrossRunsAndWorkerCounts) {
  const auto a = run_experiment(config_, small_corpus());
  config_.jobs = 3;
  const auto b = run_experiment(config_, small_corpus());
  ASSERT_TRUE(a.complete() && b.complete());
  EXPECT_EQ(a.cells, b.cells);
  for (const char* plan : {"kfold", "holdout"}) {
    std::ostringstream x;
    std::ostringstream y;
    write_long_csv(x, a.rows_for(plan));
    write_long_csv(y, b.rows_for(plan));
    EXPECT_EQ(x.str(), y.str());
  }
}

TEST_F(Experiment, SeedChangesResults) {
  const auto a = run_experiment(config_, small_corpus());
  config_.seed += 1;
  const auto b = run_experiment(config_, small_corpus());
  EXPECT_NE(a.cells, b.cells);
}

TEST_F(Experiment, SplitsSharedAcrossExtractors) {
  const auto plan = SplitPlan::holdout(0.2, 3);
  EXPECT_EQ(seeded_plan(plan, 9, Scheme::Balanced), seeded_plan(plan, 9, Scheme::Balanced));
  EXPECT_NE(seeded_plan(plan, 9, Scheme::Balanced).seed,
            seeded_plan(plan, 9, Scheme::Imbalanced).seed);
  EXPECT_NE(dataset_seed(9, Scheme::Balanced), dataset_seed(10, Scheme::Balanced));
}

TEST_F(Experiment, BundleContentsAndRecomputation) {
  const auto result = run_experiment(config_, small_corpus());
  const auto out = write_bundle(config_, result);
  EXPECT_EQ(out, config_.output_dir);
  for (const char* name :
       {"config.json", "manifest.json", "cells_kfold.csv", "cells_holdout.csv",
        "performance_kfold.csv", "performance_kfold.txt", "anova_imbalanced.csv",
        "omega_squared_balanced.csv", "tukey_extractors_balanced.csv", "stats_imbalanced.txt",
        "boxplot_holdout_balanced.csv", "boxplot_summary_kfold_imbalanced.csv"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  EXPECT_EQ(parse_config(slurp(out / "config.json")), config_);

  // Every table is a function of the cells CSV.
  std::ifstream cells(out / "cells_kfold.csv");
  const auto rows = read_long_csv(cells);
  EXPECT_EQ(rows.size(), 2u * 2u * 3u * 2u);
  std::ostringstream perf;
  write_performance_csv(perf, performance_table(rows));
  EXPECT_EQ(perf.str(), slurp(out / "performance_kfold.csv"));
  std::ostringstream summary;
  write_boxplot_summary(summary, rows, "imbalanced");
  EXPECT_EQ(summary.str(), slurp(out / "boxplot_summary_kfold_imbalanced.csv"));

  std::ifstream holdout(out / "cells_holdout.csv");
  const auto hrows = read_long_csv(holdout);
  std::ostringstream anova;
  write_anova_csv(anova, analyze_scheme(hrows, "balanced").anova);
  EXPECT_EQ(anova.str(), slurp(out / "anova_balanced.csv"));

  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["status"], "complete");
  EXPECT_EQ(manifest["cells_completed"], 24);
  EXPECT_EQ(manifest["config_hash"], config_hash(config_));

  // Summary row count is schemes x extractors x models.
  std::istringstream lines(summary.str());
  std::size_t n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  EXPECT_EQ(n, 1u + 2u * 3u);
}

TEST_F(Experiment, BundleReplacesPreviousOutputAtomically) {
  fs::create_directories(config_.output_dir);
  std::ofstream(config_.output_dir / "stale.txt") << "old";
  config_.kfold.reset();
  const auto result = run_experiment(config_, small_corpus());
  write_bundle(config_, result);
  EXPECT_FALSE(fs::exists(config_.output_dir / "stale.txt"));
  for (const auto& entry : fs::directory_iterator(dir_)) {
    EXPECT_EQ(entry.path().filename().string().find(".tmp-"), std::string::npos);
  }
}

TEST_F(Experiment, FailureWritesPartialManifest) {
  config_.schemes = {Scheme::Imbalanced};
  config_.extractors = {Extractor::Wfe};
  config_.models = {ModelKind::Nb, ModelKind::Qda};
  config_.kfold.reset();
  config_.preprocess.pca = false;
  config_.preprocess.standardize = false;
  config_.hyperparams.ridge = 0.0;
  const auto result = run_experiment(config_, small_corpus());
  ASSERT_FALSE(result.complete());
  ASSERT_TRUE(result.failure.has_value());
  EXPECT_NE(result.failure->find("QDA"), std::string::npos) << *result.failure;
  const auto out = write_bundle(config_, result);
  EXPECT_EQ(out.filename(), "out.partial");
  EXPECT_FALSE(fs::exists(config_.output_dir));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["status"], "failed");
  ASSERT_EQ(manifest["cells"].size(), 1u);
  EXPECT_EQ(manifest["cells"][0]["model"], "NB");
}

TEST_F(Experiment, StatsSkippedWithoutReplications) {
  config_.holdout.reset();
  config_.kfold = SplitPlan::kfold(5, 1);
  config_.stats_plan = "kfold";
  const auto result = run_experiment(config_, small_corpus());
  const auto out = write_bundle(config_, result);
  EXPECT_FALSE(fs::exists(out / "anova_imbalanced.csv"));
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["stats_skipped"].size(), 2u);
}

TEST(FiveNumber, HandExample) {
  const auto f = five_number_summary({1, 2, 3, 4, 100});
  EXPECT_EQ(f.min, 1.0);
  EXPECT_EQ(f.q1, 2.0);
  EXPECT_EQ(f.median, 3.0);
  EXPECT_EQ(f.q3, 4.0);
  EXPECT_EQ(f.max, 100.0);
  EXPECT_EQ(f.outliers, std::vector<double>{100.0});
  EXPECT_EQ(f.upper_whisker, 4.0);
  EXPECT_EQ(f.lower_whisker, 1.0);
}

TEST(FiveNumber, SingleValue) {
  const auto f = five_number_summary({0.93});
  EXPECT_EQ(f.min, 0.93);
  EXPECT_EQ(f.q1, 0.93);
  EXPECT_EQ(f.median, 0.93);
  EXPECT_EQ(f.q3, 0.93);
  EXPECT_EQ(f.max, 0.93);
  EXPECT_TRUE(f.outliers.empty());
}

TEST(Performance, MeansAndMissingRates) {
  const std::vector<LongRow> rows{{"balanced", "db2", "SVM", 0, 0.9, 1.0, std::nullopt},
                                  {"balanced", "db2", "SVM", 1, 0.8, 0.5, 0.75}};
  const auto t = performance_table(rows);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_DOUBLE_EQ(t[0].accuracy.mean, 0.85);
  EXPECT_EQ(t[0].specificity.count, 1u);
  EXPECT_DOUBLE_EQ(t[0].specificity.mean, 0.75);
  std::ostringstream text;
  write_performance_text(text, t);
  EXPECT_NE(text.str().find("85.00 ± 7.07"), std::string::npos) << text.str();
}

}  // namespace
}  // namespace sbench
