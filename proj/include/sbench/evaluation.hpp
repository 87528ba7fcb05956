// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbench/classifiers.hpp"
#include "sbench/corpus.hpp"
#include "sbench/features.hpp"
#include "sbench/pca.hpp"

namespace sbench {

struct SplitPlan {
  enum class Mode { KFold, Holdout };

  Mode mode = Mode::KFold;
  int k = 10;
  double test_fraction = 0.2;
  int n_repeats = 1;
  std::uint64_t seed = 0;

  static SplitPlan kfold(int k, int n_repeats, std::uint64_t seed = 0);
  static SplitPlan holdout(double test_fraction, int n_repeats, std::uint64_t seed = 0);

  // "kfold" or "holdout"; used in file names and seed derivation.
  std::string name() const;
  void validate() const;  // throws ConfigError
  bool operator==(const SplitPlan&) const = default;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  int replication = 0;
  int fold = 0;
};

// Stratified splits, grouped by replication. K-fold deals each label's
// shuffled indices round-robin over the folds with a counter shared across
// labels, so fold sizes differ by at most one overall and per label. Holdout
// draws round(test_fraction * n_label) test rows from every label. Throws
// DataError when stratification is impossible.
std::vector<Split> make_splits(const std::vector<int>& labels, const SplitPlan& plan);

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted,
                          int positive_label = 1);

// Undefined rates (no positives or no negatives) are empty, never 0.
struct Metrics {
  double accuracy = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

Metrics confusion_metrics(const ConfusionMatrix& cm);

struct ReplicationMetrics {
  int replication = 0;
  double accuracy = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;

  bool operator==(const ReplicationMetrics&) const = default;
};

struct CellResult {
  Scheme scheme = Scheme::Imbalanced;
  Extractor extractor = Extractor::Wfe;
  ModelKind model = ModelKind::Lda;
  std::string plan;
  std::vector<ReplicationMetrics> replications;
  // Mean number of features reaching the classifier.
  double mean_dimensions = 0.0;
  std::string model_summary;  // from the first fitted model

  bool operator==(const CellResult&) const = default;
};

struct PreprocessConfig {
  bool standardize = true;  // z-score before PCA
  bool pca = true;
  bool pca_on_wfe = true;
  double variance_target = 0.95;

  bool operator==(const PreprocessConfig&) const = default;
};

// Train-fold statistics applied to both portions of a split.
struct Preprocessor {
  std::optional<Standardizer> scaler;
  std::optional<PcaModel> pca;

  static Preprocessor fit(const Eigen::MatrixXd& train, Extractor extractor,
                          const PreprocessConfig& config);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& data) const;
};

// A split with the preprocessing already fitted and applied; shared by every
// model evaluated on the same features.
struct PreparedSplit {
  int replication = 0;
  int fold = 0;
  Eigen::MatrixXd train_x;
  Eigen::MatrixXd test_x;
  std::vector<int> train_y;
  std::vector<int> test_y;
};

std::vector<PreparedSplit> prepare_splits(const FeatureMatrix& features,
                                          const std::vector<Split>& splits,
                                          const PreprocessConfig& config);

struct CellContext {
  Scheme scheme = Scheme::Imbalanced;
  std::uint64_t master_seed = 0;
};

std::uint64_t model_seed(const CellContext& context, Extractor extractor, ModelKind model,
                         const std::string& plan, int replication, int fold);

// Fits and scores one model on every prepared split. K-fold replications
// report the mean over their folds. Failures surface as CellError naming the
// extractor, model and replication.
CellResult evaluate_model(const std::vector<PreparedSplit>& prepared, Extractor extractor,
                          ModelKind model, const Hyperparams& params, const SplitPlan& plan,
                          const CellContext& context);

CellResult run_cell(const FeatureMatrix& features, ModelKind model, const Hyperparams& params,
                    const SplitPlan& plan, const PreprocessConfig& preprocess,
                    const CellContext& context);

CellResult run_cell(const LabeledDataset& dataset, Extractor extractor, ModelKind model,
                    const Hyperparams& params, const SplitPlan& plan,
                    const FeatureConfig& features = {}, const PreprocessConfig& preprocess = {},
                    std::uint64_t master_seed = 0);

// Long format: scheme,extractor,model,replication,accuracy,sensitivity,specificity
struct LongRow {
  std::string scheme;
  std::string extractor;
  std::string model;
  int replication = 0;
  double accuracy = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

std::vector<LongRow> to_long_rows(const std::vector<CellResult>& cells);
void write_long_csv(std::ostream& out, const std::vector<LongRow>& rows);
// Throws DataError on a malformed header or row.
std::vector<LongRow> read_long_csv(std::istream& in);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;  // sample standard deviation, 0 for one value
  std::size_t count = 0;
};

Summary summarize(const std::vector<double>& values);

}  // namespace sbench
