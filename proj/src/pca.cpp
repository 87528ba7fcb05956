// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/pca.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "sbench/seed.hpp"

namespace sbench {

namespace {

void hash_matrix(SeedKey& key, const Eigen::MatrixXd& m) {
  key.add(static_cast<std::uint64_t>(m.rows())).add(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) key.add(std::bit_cast<std::uint64_t>(m.data()[i]));
}

}  // namespace

std::uint64_t PcaModel::fingerprint() const {
  SeedKey key(0x5043414d4f44454cULL);
  hash_matrix(key, means);
  hash_matrix(key, axes);
  for (double r : explained_ratio) key.add(std::bit_cast<std::uint64_t>(r));
  key.add(static_cast<std::uint64_t>(retained));
  key.add(std::bit_cast<std::uint64_t>(total_variance));
  return key.value();
}

PcaModel pca_fit(const Eigen::MatrixXd& data, double variance_target, bool strict) {
  if (data.rows() < 2) throw std::invalid_argument("PCA needs at least 2 rows");
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("PCA variance target must be in (0, 1], got {}", variance_target));
  }
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();

  PcaModel model;
  model.means = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - model.means;

  Eigen::VectorXd eigenvalues;
  if (d <= n) {
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("PCA eigendecomposition failed");
    eigenvalues = solver.eigenvalues().reverse();
    model.axes = solver.eigenvectors().rowwise().reverse();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    eigenvalues = svd.singularValues().array().square() / static_cast<double>(n - 1);
    model.axes = svd.matrixV();
  }

  // Deterministic orientation: the largest-magnitude loading of each axis is positive.
  for (Eigen::Index c = 0; c < model.axes.cols(); ++c) {
    Eigen::Index arg = 0;
    model.axes.col(c).cwiseAbs().maxCoeff(&arg);
    if (model.axes(arg, c) < 0.0) model.axes.col(c) *= -1.0;
  }

  eigenvalues = eigenvalues.cwiseMax(0.0);
  model.total_variance = eigenvalues.sum();
  model.explained_ratio.assign(static_cast<std::size_t>(eigenvalues.size()), 0.0);
  if (!(model.total_variance > 0.0)) {
    if (strict) throw std::invalid_argument("PCA input has zero variance");
    model.retained = 0;
    return model;
  }
  double cumulative = 0.0;
  model.retained = model.explained_ratio.size();
  bool reached = false;
  for (std::size_t i = 0; i < model.explained_ratio.size(); ++i) {
    model.explained_ratio[i] = eigenvalues[static_cast<Eigen::Index>(i)] / model.total_variance;
    cumulative += model.explained_ratio[i];
    if (!reached && cumulative >= variance_target - 1e-12) {
      model.retained = i + 1;
      reached = true;
    }
  }
  return model;
}

Eigen::MatrixXd pca_apply(const PcaModel& model, const Eigen::MatrixXd& data) {
  if (data.cols() != model.means.cols()) {
    throw std::invalid_argument(fmt::format("PCA model expects {} columns, got {}",
                                            model.means.cols(), data.cols()));
  }
  const auto k = static_cast<Eigen::Index>(model.retained);
  return (data.rowwise() - model.means) * model.axes.leftCols(k);
}

Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores) {
  if (scores.cols() > model.axes.cols()) {
    throw std::invalid_argument("more component scores than principal axes");
  }
  Eigen::MatrixXd out = scores * model.axes.leftCols(scores.cols()).transpose();
  out.rowwise() += model.means;
  return out;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& data) {
  if (data.rows() < 1) throw std::invalid_argument("cannot standardize an empty matrix");
  Standardizer s;
  s.means = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - s.means;
  s.scales = (centered.array().square().colwise().sum() / static_cast<double>(data.rows()))
                 .sqrt()
                 .matrix();
  for (Eigen::Index c = 0; c < s.scales.size(); ++c) {
    if (!(s.scales[c] > 0.0)) s.scales[c] = 1.0;
  }
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& data) const {
  if (data.cols() != means.cols()) throw std::invalid_argument("standardizer column mismatch");
  return ((data.rowwise() - means).array().rowwise() / scales.array()).matrix();
}

}  // namespace sbench
