// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sbench {

enum class Kernel { Rbf, Poly, Sigmoid, Linear };

std::string to_string(Kernel kernel);
Kernel parse_kernel(std::string_view name);

struct KernelParams {
  Kernel kind = Kernel::Rbf;
  double gamma = 1.0;
  int degree = 3;
  double coef0 = 0.0;

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                    const Eigen::Ref<const Eigen::RowVectorXd>& b) const;
};

struct SvmOptions {
  Kernel kernel = Kernel::Rbf;
  double c = 1.0;
  std::optional<double> gamma;  // unset: 1 / (d * var(X))
  int degree = 3;
  double coef0 = 0.0;
  double tolerance = 1e-3;
  long max_iterations = 10'000'000;

  bool operator==(const SvmOptions&) const = default;
};

// Binary soft-margin SVM. Training labels are mapped to -1 (smaller label)
// and +1 (larger label).
struct SvmModel {
  KernelParams kernel;
  double c = 1.0;
  int negative_label = -1;
  int positive_label = 1;
  Eigen::MatrixXd support_vectors;
  Eigen::VectorXd dual_coef;  // alpha_i * y_i for each support vector
  double bias = 0.0;
  long iterations = 0;

  // All training duals, kept so optimality conditions can be audited.
  Eigen::VectorXd alpha;
  std::vector<int> support_index;

  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd decisions(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

// Default RBF width for a training matrix.
double default_gamma(const Eigen::MatrixXd& x);

// Solves the dual with SMO using second-order working set selection. Throws
// ConvergenceError when max_iterations is reached.
SvmModel svm_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, const SvmOptions& options);

// Largest violation of the KKT conditions on the training set, measured on
// y_i f(x_i) against 1.
double svm_kkt_violation(const SvmModel& model, const Eigen::MatrixXd& x,
                         const std::vector<int>& y);

}  // namespace sbench
