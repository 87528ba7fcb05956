// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace sbench {

class Rng;

// Flat binary tree. Rows with x[feature] <= threshold go left. Leaves carry
// `value`: a class label for classification trees, a score for regression.
struct DecisionTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    bool leaf() const { return feature < 0; }
  };
  std::vector<Node> nodes;

  double evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  int depth() const;
  std::size_t leaf_count() const;
};

struct TreeOptions {
  std::optional<int> max_depth;     // unset: grow until pure
  std::optional<int> max_features;  // unset: all features
  int min_samples_split = 2;
};

// Gini CART on the given rows (duplicates allowed, e.g. a bootstrap sample).
// Among candidate splits the lowest weighted impurity wins, then the lowest
// feature index, then the lowest threshold. When none of the sampled
// features can split a node, further features are drawn until one can.
DecisionTree fit_classification_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                     const std::vector<std::size_t>& rows,
                                     const TreeOptions& options, Rng* rng);

// Least-squares regression tree; each leaf stores the mean target of its rows.
DecisionTree fit_regression_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& target,
                                 const std::vector<std::size_t>& rows,
                                 const TreeOptions& options);

struct ForestOptions {
  int n_trees = 100;
  std::optional<int> max_features;  // unset: ceil(sqrt(d))
  std::optional<int> max_depth;
  bool bootstrap = true;

  bool operator==(const ForestOptions&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<int> classes;

  // Majority vote; ties go to the smaller label.
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

ForestModel rf_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                   const ForestOptions& options, std::uint64_t seed);

struct BoostingOptions {
  int n_stages = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  double subsample = 1.0;

  bool operator==(const BoostingOptions&) const = default;
};

// Binary logistic gradient boosting. The larger training label is positive.
struct BoostedModel {
  double initial_score = 0.0;
  double learning_rate = 0.1;
  std::vector<DecisionTree> stages;
  int negative_label = 0;
  int positive_label = 1;
  // Mean training log-loss before the first stage and after each stage.
  std::vector<double> loss_trajectory;

  Eigen::VectorXd score(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd probability(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

BoostedModel gb_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                    const BoostingOptions& options, std::uint64_t seed);

}  // namespace sbench
