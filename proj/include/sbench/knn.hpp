// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace sbench {

// Majority vote of the k nearest training rows (Euclidean). A tied vote is
// resolved by the label of the single nearest neighbour; equal distances are
// ordered by training row index.
int knn_predict(const Eigen::MatrixXd& train_x, const std::vector<int>& train_y,
                const Eigen::Ref<const Eigen::RowVectorXd>& query, int k);

struct KnnModel {
  Eigen::MatrixXd train_x;
  std::vector<int> train_y;
  int k = 5;

  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

KnnModel knn_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int k);

}  // namespace sbench
