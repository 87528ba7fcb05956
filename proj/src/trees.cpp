// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "sbench/discriminant.hpp"
#include "sbench/random.hpp"
#include "sbench/seed.hpp"

namespace sbench {

double DecisionTree::evaluate(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  std::size_t at = 0;
  while (!nodes[at].leaf()) {
    const auto& n = nodes[at];
    at = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
  }
  return nodes[at].value;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.leaf(); }));
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();

  bool better_than(const Split& other) const {
    if (score != other.score) return score < other.score;
    if (feature != other.feature) return feature < other.feature;
    return threshold < other.threshold;
  }
};

double midpoint(double lo, double hi) {
  const double mid = lo + 0.5 * (hi - lo);
  return mid < hi ? mid : lo;
}

// Shared recursive builder. `Impurity` supplies the node statistics.
template <typename Impurity>
class Builder {
 public:
  Builder(const Eigen::MatrixXd& x, const Impurity& impurity, const TreeOptions& options,
          Rng* rng)
      : x_(x), impurity_(impurity), options_(options), rng_(rng) {
    features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<std::size_t> rows) {
    DecisionTree tree;
    grow(tree, std::move(rows), 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, std::vector<std::size_t> rows, int depth) {
    const auto index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.back().value = impurity_.leaf_value(rows);

    const bool depth_left = !options_.max_depth || depth < *options_.max_depth;
    if (!depth_left || static_cast<int>(rows.size()) < options_.min_samples_split ||
        impurity_.pure(rows)) {
      return index;
    }
    const Split split = best_split(rows);
    if (split.feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) {
      (x_(static_cast<Eigen::Index>(r), split.feature) <= split.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(tree, std::move(left), depth + 1);
    const int r = grow(tree, std::move(right), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  Split best_split(const std::vector<std::size_t>& rows) {
    const auto d = features_.size();
    std::size_t quota = d;
    if (options_.max_features && rng_ != nullptr) {
      quota = std::min(d, static_cast<std::size_t>(std::max(1, *options_.max_features)));
      rng_->shuffle(std::span<int>(features_));
    }
    Split best;
    std::vector<std::pair<double, std::size_t>> column(rows.size());
    for (std::size_t f = 0; f < d; ++f) {
      if (f >= quota && best.feature >= 0) break;
      const int feature = features_[f];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {x_(static_cast<Eigen::Index>(rows[i]), feature), rows[i]};
      }
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      const Split candidate = impurity_.scan(column, feature);
      if (candidate.feature >= 0 && candidate.better_than(best)) best = candidate;
    }
    return best;
  }

  const Eigen::MatrixXd& x_;
  const Impurity& impurity_;
  const TreeOptions& options_;
  Rng* rng_;
  std::vector<int> features_;
};

class Gini {
 public:
  Gini(const std::vector<int>& class_of, std::vector<int> classes)
      : class_of_(class_of), classes_(std::move(classes)) {}

  double leaf_value(const std::vector<std::size_t>& rows) const {
    const auto counts = count(rows);
    const auto top = std::max_element(counts.begin(), counts.end()) - counts.begin();
    return classes_[static_cast<std::size_t>(top)];
  }

  bool pure(const std::vector<std::size_t>& rows) const {
    for (auto r : rows) {
      if (class_of_[r] != class_of_[rows.front()]) return false;
    }
    return true;
  }

  Split scan(const std::vector<std::pair<double, std::size_t>>& column, int feature) const {
    const auto k = classes_.size();
    std::vector<double> left(k, 0.0);
    std::vector<double> right(k, 0.0);
    for (const auto& [v, r] : column) right[static_cast<std::size_t>(class_of_[r])] += 1.0;
    double left_sq = 0.0;
    double right_sq = 0.0;
    for (double c : right) right_sq += c * c;
    const auto n = static_cast<double>(column.size());
    Split best;
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      const auto c = static_cast<std::size_t>(class_of_[column[i].second]);
      left_sq += 2.0 * left[c] + 1.0;
      right_sq -= 2.0 * right[c] - 1.0;
      left[c] += 1.0;
      right[c] -= 1.0;
      if (column[i].first == column[i + 1].first) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = n - nl;
      const double score = (nl - left_sq / nl) + (nr - right_sq / nr);
      if (score < best.score) {
        best.score = score;
        best.feature = feature;
        best.threshold = midpoint(column[i].first, column[i + 1].first);
      }
    }
    return best;
  }

 private:
  std::vector<double> count(const std::vector<std::size_t>& rows) const {
    std::vector<double> counts(classes_.size(), 0.0);
    for (auto r : rows) counts[static_cast<std::size_t>(class_of_[r])] += 1.0;
    return counts;
  }

  const std::vector<int>& class_of_;
  std::vector<int> classes_;
};

class SquaredError {
 public:
  explicit SquaredError(const Eigen::VectorXd& target) : target_(target) {}

  double leaf_value(const std::vector<std::size_t>& rows) const {
    double sum = 0.0;
    for (auto r : rows) sum += target_[static_cast<Eigen::Index>(r)];
    return sum / static_cast<double>(rows.size());
  }

  bool pure(const std::vector<std::size_t>& rows) const {
    const double first = target_[static_cast<Eigen::Index>(rows.front())];
    for (auto r : rows) {
      if (target_[static_cast<Eigen::Index>(r)] != first) return false;
    }
    return true;
  }

  Split scan(const std::vector<std::pair<double, std::size_t>>& column, int feature) const {
    double total = 0.0;
    for (const auto& [v, r] : column) total += target_[static_cast<Eigen::Index>(r)];
    const auto n = static_cast<double>(column.size());
    double left = 0.0;
    Split best;
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      left += target_[static_cast<Eigen::Index>(column[i].second)];
      if (column[i].first == column[i + 1].first) continue;
      const double nl = static_cast<double>(i + 1);
      const double right = total - left;
      const double score = -(left * left / nl + right * right / (n - nl));
      if (score < best.score) {
        best.score = score;
        best.feature = feature;
        best.threshold = midpoint(column[i].first, column[i + 1].first);
      }
    }
    return best;
  }

 private:
  const Eigen::VectorXd& target_;
};

void check_rows(const Eigen::MatrixXd& x, std::size_t labels, const std::vector<std::size_t>& rows) {
  if (static_cast<std::size_t>(x.rows()) != labels) {
    throw std::invalid_argument(fmt::format("{} rows but {} targets", x.rows(), labels));
  }
  if (rows.empty()) throw std::invalid_argument("tree needs at least one row");
  for (auto r : rows) {
    if (r >= labels) throw std::out_of_range("tree row index out of range");
  }
}

std::vector<int> class_indices(const std::vector<int>& y, const std::vector<int>& classes) {
  std::vector<int> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(classes.begin(), classes.end(), y[i]) -
                              classes.begin());
  }
  return out;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

double mean_log_loss(const Eigen::VectorXd& score, const Eigen::VectorXd& target) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    const double f = score[i];
    const double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
    sum += softplus - target[i] * f;
  }
  return sum / static_cast<double>(score.size());
}

double sigmoid(double f) { return 1.0 / (1.0 + std::exp(-f)); }

}  // namespace

DecisionTree fit_classification_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                     const std::vector<std::size_t>& rows,
                                     const TreeOptions& options, Rng* rng) {
  check_rows(x, y.size(), rows);
  auto classes = distinct_labels(y);
  const auto class_of = class_indices(y, classes);
  const Gini gini(class_of, std::move(classes));
  Builder<Gini> builder(x, gini, options, rng);
  return builder.build(rows);
}

DecisionTree fit_regression_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& target,
                                 const std::vector<std::size_t>& rows,
                                 const TreeOptions& options) {
  check_rows(x, static_cast<std::size_t>(target.size()), rows);
  const SquaredError sse(target);
  Builder<SquaredError> builder(x, sse, options, nullptr);
  return builder.build(rows);
}

std::vector<int> ForestModel::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  std::vector<int> votes(classes.size());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& tree : trees) {
      const auto label = static_cast<int>(tree.evaluate(x.row(r)));
      ++votes[static_cast<std::size_t>(
          std::lower_bound(classes.begin(), classes.end(), label) - classes.begin())];
    }
    const auto top = std::max_element(votes.begin(), votes.end()) - votes.begin();
    out[static_cast<std::size_t>(r)] = classes[static_cast<std::size_t>(top)];
  }
  return out;
}

ForestModel rf_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                   const ForestOptions& options, std::uint64_t seed) {
  if (y.size() < 2) throw std::invalid_argument("random forest needs at least 2 samples");
  if (options.n_trees < 1) throw std::invalid_argument("random forest needs at least one tree");
  const auto n = y.size();
  const int d = static_cast<int>(x.cols());
  TreeOptions tree_options;
  tree_options.max_depth = options.max_depth;
  tree_options.max_features =
      options.max_features ? std::min(*options.max_features, d)
                           : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));

  ForestModel model;
  model.classes = distinct_labels(y);
  for (int t = 0; t < options.n_trees; ++t) {
    Rng rng(SeedKey(seed).add("tree").add(static_cast<std::uint64_t>(t)).value());
    std::vector<std::size_t> rows(n);
    if (options.bootstrap) {
      for (auto& r : rows) r = rng.index(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.trees.push_back(fit_classification_tree(x, y, rows, tree_options, &rng));
  }
  return model;
}

Eigen::VectorXd BoostedModel::score(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd f = Eigen::VectorXd::Constant(x.rows(), initial_score);
  for (const auto& tree : stages) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) f[r] += learning_rate * tree.evaluate(x.row(r));
  }
  return f;
}

Eigen::VectorXd BoostedModel::probability(const Eigen::MatrixXd& x) const {
  return score(x).unaryExpr([](double f) { return sigmoid(f); });
}

std::vector<int> BoostedModel::predict(const Eigen::MatrixXd& x) const {
  const Eigen::VectorXd p = probability(x);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < p.size(); ++r) {
    out[static_cast<std::size_t>(r)] = p[r] > 0.5 ? positive_label : negative_label;
  }
  return out;
}

BoostedModel gb_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                    const BoostingOptions& options, std::uint64_t seed) {
  const auto n = y.size();
  if (n == 0 || static_cast<std::size_t>(x.rows()) != n) {
    throw std::invalid_argument("gradient boosting label count mismatch");
  }
  if (options.n_stages < 1 || options.max_depth < 1) {
    throw std::invalid_argument("gradient boosting needs n_stages and max_depth >= 1");
  }
  if (!(options.learning_rate >= 0.0 && options.learning_rate <= 1.0)) {
    throw std::invalid_argument("learning_rate must lie in [0, 1]");
  }
  if (!(options.subsample > 0.0 && options.subsample <= 1.0)) {
    throw std::invalid_argument("subsample must lie in (0, 1]");
  }
  const auto classes = distinct_labels(y);
  if (classes.size() > 2) throw std::invalid_argument("gradient boosting is binary");

  BoostedModel model;
  model.learning_rate = options.learning_rate;
  model.negative_label = classes.front();
  model.positive_label = classes.back();

  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    target[static_cast<Eigen::Index>(i)] = y[i] == model.positive_label ? 1.0 : 0.0;
  }
  if (classes.size() == 1) target.setOnes();
  const double prior = std::clamp(target.mean(), 1e-12, 1.0 - 1e-12);
  model.initial_score = std::log(prior / (1.0 - prior));

  Eigen::VectorXd f = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), model.initial_score);
  model.loss_trajectory.push_back(mean_log_loss(f, target));

  TreeOptions tree_options;
  tree_options.max_depth = options.max_depth;
  const auto subsample_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(options.subsample * static_cast<double>(n))));
  const auto everything = all_rows(n);
  Eigen::VectorXd residual(static_cast<Eigen::Index>(n));
  for (int stage = 0; stage < options.n_stages; ++stage) {
    for (Eigen::Index i = 0; i < residual.size(); ++i) residual[i] = target[i] - sigmoid(f[i]);
    std::vector<std::size_t> rows = everything;
    if (subsample_size < n) {
      Rng rng(SeedKey(seed).add("stage").add(static_cast<std::uint64_t>(stage)).value());
      rng.shuffle(std::span<std::size_t>(rows));
      rows.resize(subsample_size);
      std::sort(rows.begin(), rows.end());
    }
    DecisionTree tree = fit_regression_tree(x, residual, rows, tree_options);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      f[i] += options.learning_rate * tree.evaluate(x.row(i));
    }
    model.stages.push_back(std::move(tree));
    model.loss_trajectory.push_back(mean_log_loss(f, target));
  }
  return model;
}

}  // namespace sbench
