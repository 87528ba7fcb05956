// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/classifiers.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <fmt/format.h>

#include "sbench/error.hpp"

namespace sbench {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Lda: return "LDA";
    case ModelKind::Qda: return "QDA";
    case ModelKind::Nb: return "NB";
    case ModelKind::Knn: return "KNN";
    case ModelKind::Svm: return "SVM";
    case ModelKind::Rf: return "RF";
    case ModelKind::Gb: return "GB";
  }
  return "?";
}

ModelKind parse_model(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto kind : kAllModels) {
    if (to_string(kind) == upper) return kind;
  }
  throw std::invalid_argument(fmt::format("unknown model '{}'", name));
}

void Hyperparams::validate() const {
  const auto fail = [](std::string_view key, std::string_view rule) {
    throw ConfigError(fmt::format("hyperparams.{}: {}", key, rule));
  };
  if (knn_k < 1) fail("knn.k", "must be >= 1");
  if (!(svm.c > 0.0)) fail("svm.C", "must be > 0");
  if (svm.gamma && !(*svm.gamma > 0.0)) fail("svm.gamma", "must be > 0");
  if (svm.degree < 1) fail("svm.degree", "must be >= 1");
  if (!(svm.tolerance > 0.0)) fail("svm.tolerance", "must be > 0");
  if (svm.max_iterations < 1) fail("svm.max_iterations", "must be >= 1");
  if (rf.n_trees < 1) fail("rf.n_trees", "must be >= 1");
  if (rf.max_features && *rf.max_features < 1) fail("rf.max_features", "must be >= 1");
  if (rf.max_depth && *rf.max_depth < 1) fail("rf.max_depth", "must be >= 1");
  if (gb.n_stages < 1) fail("gb.n_stages", "must be >= 1");
  if (!(gb.learning_rate > 0.0 && gb.learning_rate <= 1.0)) {
    fail("gb.learning_rate", "must lie in (0, 1]");
  }
  if (gb.max_depth < 1) fail("gb.max_depth", "must be >= 1");
  if (!(gb.subsample > 0.0 && gb.subsample <= 1.0)) fail("gb.subsample", "must lie in (0, 1]");
  if (!(ridge >= 0.0)) fail("ridge", "must be >= 0");
  if (!(nb_var_floor > 0.0)) fail("nb.var_floor", "must be > 0");
}

std::vector<int> TrainedModel::predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd scaled = scaler ? scaler->apply(x) : x;
  return std::visit([&](const auto& m) { return m.predict(scaled); }, state);
}

std::string TrainedModel::summary() const {
  struct Describe {
    std::string operator()(const LdaModel& m) const {
      return fmt::format("{} classes", m.classes.size());
    }
    std::string operator()(const QdaModel& m) const {
      return fmt::format("{} classes", m.classes.size());
    }
    std::string operator()(const NaiveBayesModel& m) const {
      return fmt::format("{} classes", m.classes.size());
    }
    std::string operator()(const KnnModel& m) const {
      return fmt::format("k={}, {} stored neighbours", m.k, m.train_x.rows());
    }
    std::string operator()(const SvmModel& m) const {
      return fmt::format("{} support vectors, {} iterations", m.support_vectors.rows(),
                         m.iterations);
    }
    std::string operator()(const ForestModel& m) const {
      return fmt::format("{} trees", m.trees.size());
    }
    std::string operator()(const BoostedModel& m) const {
      return fmt::format("{} stages", m.stages.size());
    }
  };
  return fmt::format("{} {}", to_string(kind), std::visit(Describe{}, state));
}

TrainedModel fit_model(ModelKind kind, const Eigen::MatrixXd& x, const std::vector<int>& y,
                       const Hyperparams& params, std::uint64_t seed) {
  TrainedModel model;
  model.kind = kind;
  const bool scale = params.standardize_distance_models &&
                     (kind == ModelKind::Knn || kind == ModelKind::Svm);
  Eigen::MatrixXd scaled;
  if (scale) {
    model.scaler = Standardizer::fit(x);
    scaled = model.scaler->apply(x);
  }
  const Eigen::MatrixXd& input = scale ? scaled : x;

  switch (kind) {
    case ModelKind::Lda: model.state = lda_fit(input, y, params.ridge); break;
    case ModelKind::Qda: model.state = qda_fit(input, y, params.ridge); break;
    case ModelKind::Nb: model.state = naive_bayes_fit(input, y, params.nb_var_floor); break;
    case ModelKind::Knn: model.state = knn_fit(input, y, params.knn_k); break;
    case ModelKind::Svm: model.state = svm_fit(input, y, params.svm); break;
    case ModelKind::Rf: model.state = rf_fit(input, y, params.rf, seed); break;
    case ModelKind::Gb: model.state = gb_fit(input, y, params.gb, seed); break;
  }
  return model;
}

}  // namespace sbench
