// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sbench/discriminant.hpp"
#include "sbench/knn.hpp"
#include "sbench/pca.hpp"
#include "sbench/svm.hpp"
#include "sbench/trees.hpp"

namespace sbench {

enum class ModelKind { Lda, Qda, Nb, Knn, Svm, Rf, Gb };

inline constexpr std::array<ModelKind, 7> kAllModels = {
    ModelKind::Lda, ModelKind::Qda, ModelKind::Nb, ModelKind::Knn,
    ModelKind::Svm, ModelKind::Rf,  ModelKind::Gb};

std::string to_string(ModelKind kind);
// Case-insensitive; accepts "LDA", "NB", "GB" and friends.
ModelKind parse_model(std::string_view name);

struct Hyperparams {
  int knn_k = 5;
  SvmOptions svm;
  ForestOptions rf;
  BoostingOptions gb;
  double ridge = 1e-6;
  double nb_var_floor = 1e-9;
  // Train-fold z-scoring in front of KNN and SVM.
  bool standardize_distance_models = true;

  // Throws ConfigError naming the offending field.
  void validate() const;
  bool operator==(const Hyperparams&) const = default;
};

using ModelState = std::variant<LdaModel, QdaModel, NaiveBayesModel, KnnModel, SvmModel,
                                ForestModel, BoostedModel>;

// Immutable once fitted; predict is safe to call concurrently.
struct TrainedModel {
  ModelKind kind = ModelKind::Lda;
  std::optional<Standardizer> scaler;
  ModelState state;

  std::vector<int> predict(const Eigen::MatrixXd& x) const;
  // Short human-readable summary, e.g. "SVM 37 support vectors".
  std::string summary() const;
};

TrainedModel fit_model(ModelKind kind, const Eigen::MatrixXd& x, const std::vector<int>& y,
                       const Hyperparams& params, std::uint64_t seed);

}  // namespace sbench
