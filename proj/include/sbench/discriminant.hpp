// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace sbench {

// Sorted distinct labels of `y`.
std::vector<int> distinct_labels(const std::vector<int>& y);

// Linear discriminant analysis with a pooled covariance:
//   G_k(x) = mu_k' S^-1 x - 1/2 mu_k' S^-1 mu_k + ln pi_k
struct LdaModel {
  std::vector<int> classes;
  Eigen::MatrixXd means;       // K x d
  Eigen::MatrixXd covariance;  // pooled, after ridge
  std::vector<double> priors;

  // Builds the model from explicit parameters (used by fitting and tests).
  static LdaModel from_parameters(std::vector<int> classes, Eigen::MatrixXd means,
                                  Eigen::MatrixXd covariance, std::vector<double> priors);

  Eigen::MatrixXd discriminants(const Eigen::MatrixXd& x) const;  // n x K
  std::vector<int> predict(const Eigen::MatrixXd& x) const;

 private:
  Eigen::MatrixXd weights_;  // d x K, S^-1 mu_k
  Eigen::RowVectorXd bias_;  // 1 x K
};

// `ridge` scales trace(S)/d onto the diagonal. `priors`, when given, follow
// the order of the sorted class labels.
LdaModel lda_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, double ridge = 1e-6,
                 const std::optional<std::vector<double>>& priors = std::nullopt);

// Quadratic discriminant analysis, one covariance per class:
//   G_k(x) = -1/2 ln|S_k| - 1/2 (x - mu_k)' S_k^-1 (x - mu_k) + ln pi_k
struct QdaModel {
  struct ClassStats {
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd covariance;
    Eigen::MatrixXd precision;
    double log_det = 0.0;
  };

  std::vector<int> classes;
  std::vector<ClassStats> stats;
  std::vector<double> priors;

  static QdaModel from_parameters(std::vector<int> classes, std::vector<Eigen::RowVectorXd> means,
                                  std::vector<Eigen::MatrixXd> covariances,
                                  std::vector<double> priors);

  Eigen::MatrixXd discriminants(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

// Throws std::runtime_error when a class covariance is singular after the ridge.
QdaModel qda_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, double ridge = 1e-6);

// Gaussian naive Bayes. Per-feature variances are floored at
// var_floor * (largest column variance of the training data).
struct NaiveBayesModel {
  std::vector<int> classes;
  Eigen::MatrixXd means;      // K x d
  Eigen::MatrixXd variances;  // K x d, floored
  std::vector<double> priors;

  Eigen::MatrixXd log_joint(const Eigen::MatrixXd& x) const;   // ln pi_k + sum_j ln N(x_j)
  Eigen::MatrixXd posteriors(const Eigen::MatrixXd& x) const;  // rows sum to 1
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

NaiveBayesModel naive_bayes_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                double var_floor = 1e-9);

// Index of the maximum per row; ties go to the first column.
std::vector<int> argmax_labels(const Eigen::MatrixXd& scores, const std::vector<int>& classes);

}  // namespace sbench
