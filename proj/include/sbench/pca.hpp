// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sbench {

struct PcaModel {
  Eigen::RowVectorXd means;
  // Principal axes as orthonormal columns, sorted by decreasing variance.
  Eigen::MatrixXd axes;
  std::vector<double> explained_ratio;  // one per axis
  std::size_t retained = 0;
  double total_variance = 0.0;

  // Stable hash of the full model state; used to check that applying a
  // model never mutates it and that test rows never influence a fit.
  std::uint64_t fingerprint() const;
};

// Centers the columns, eigendecomposes the sample covariance (through a thin
// SVD when there are more columns than rows) and retains the smallest number
// of components whose cumulative explained variance reaches `variance_target`.
// Zero-variance input gives a model with no retained components, or throws
// std::invalid_argument when `strict` is set.
PcaModel pca_fit(const Eigen::MatrixXd& data, double variance_target = 0.95, bool strict = false);

// Projects rows onto the retained axes.
Eigen::MatrixXd pca_apply(const PcaModel& model, const Eigen::MatrixXd& data);

// Maps component scores (any leading subset of the axes) back to the data space.
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores);

// Column z-scoring with population statistics; constant columns get scale 1.
struct Standardizer {
  Eigen::RowVectorXd means;
  Eigen::RowVectorXd scales;

  static Standardizer fit(const Eigen::MatrixXd& data);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& data) const;
  bool operator==(const Standardizer& other) const {
    return means == other.means && scales == other.scales;
  }
};

}  // namespace sbench
