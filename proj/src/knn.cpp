// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace sbench {

int knn_predict(const Eigen::MatrixXd& train_x, const std::vector<int>& train_y,
                const Eigen::Ref<const Eigen::RowVectorXd>& query, int k) {
  const auto n = static_cast<std::size_t>(train_x.rows());
  if (n == 0) throw std::invalid_argument("KNN training set is empty");
  if (train_y.size() != n) throw std::invalid_argument("KNN label count mismatch");
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw std::invalid_argument(fmt::format("k={} outside [1, {}]", k, n));
  }
  if (query.size() != train_x.cols()) throw std::invalid_argument("KNN query width mismatch");

  const Eigen::VectorXd dist = (train_x.rowwise() - query).rowwise().squaredNorm();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto closer = [&](std::size_t a, std::size_t b) {
    const auto da = dist[static_cast<Eigen::Index>(a)];
    const auto db = dist[static_cast<Eigen::Index>(b)];
    return da < db || (da == db && a < b);
  };
  const auto kk = static_cast<std::size_t>(k);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                    closer);

  std::map<int, int> votes;
  for (std::size_t i = 0; i < kk; ++i) ++votes[train_y[order[i]]];
  int top = 0;
  for (const auto& [label, count] : votes) top = std::max(top, count);
  for (std::size_t i = 0; i < kk; ++i) {
    if (votes[train_y[order[i]]] == top) return train_y[order[i]];
  }
  return train_y[order[0]];
}

std::vector<int> KnnModel::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out[static_cast<std::size_t>(r)] = knn_predict(train_x, train_y, x.row(r), k);
  }
  return out;
}

KnnModel knn_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, int k) {
  if (x.rows() == 0) throw std::invalid_argument("KNN training set is empty");
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw std::invalid_argument("KNN label count mismatch");
  }
  if (k < 1 || k > x.rows()) {
    throw std::invalid_argument(fmt::format("k={} outside [1, {}]", k, x.rows()));
  }
  return KnnModel{x, y, k};
}

}  // namespace sbench
