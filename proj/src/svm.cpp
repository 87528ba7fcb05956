// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "sbench/discriminant.hpp"
#include "sbench/error.hpp"

namespace sbench {

std::string to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::Rbf: return "rbf";
    case Kernel::Poly: return "poly";
    case Kernel::Sigmoid: return "sigmoid";
    case Kernel::Linear: return "linear";
  }
  return "?";
}

Kernel parse_kernel(std::string_view name) {
  if (name == "rbf") return Kernel::Rbf;
  if (name == "poly" || name == "polynomial") return Kernel::Poly;
  if (name == "sigmoid") return Kernel::Sigmoid;
  if (name == "linear") return Kernel::Linear;
  throw std::invalid_argument(fmt::format("unknown kernel '{}'", name));
}

double KernelParams::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& a,
                                const Eigen::Ref<const Eigen::RowVectorXd>& b) const {
  switch (kind) {
    case Kernel::Rbf: return std::exp(-gamma * (a - b).squaredNorm());
    case Kernel::Poly: return std::pow(gamma * a.dot(b) + coef0, degree);
    case Kernel::Sigmoid: return std::tanh(gamma * a.dot(b) + coef0);
    case Kernel::Linear: return a.dot(b);
  }
  return 0.0;
}

double default_gamma(const Eigen::MatrixXd& x) {
  const double n = static_cast<double>(x.size());
  const double mean = x.sum() / n;
  const double var = (x.array() - mean).square().sum() / n;
  return var > 0.0 ? 1.0 / (static_cast<double>(x.cols()) * var) : 1.0;
}

double SvmModel::decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  double f = bias;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
    f += dual_coef[i] * kernel(support_vectors.row(i), x);
  }
  return f;
}

Eigen::VectorXd SvmModel::decisions(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = decision(x.row(r));
  return out;
}

std::vector<int> SvmModel::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    out[static_cast<std::size_t>(r)] = decision(x.row(r)) > 0.0 ? positive_label : negative_label;
  }
  return out;
}

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SvmModel svm_fit(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                 const SvmOptions& options) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (x.rows() != n || n == 0) throw std::invalid_argument("SVM label count mismatch");
  if (!(options.c > 0.0)) throw std::invalid_argument("SVM C must be positive");
  const auto classes = distinct_labels(labels);
  if (classes.size() != 2) {
    throw std::invalid_argument(
        fmt::format("SVM needs exactly two labels, got {}", classes.size()));
  }

  SvmModel model;
  model.c = options.c;
  model.negative_label = classes[0];
  model.positive_label = classes[1];
  model.kernel.kind = options.kernel;
  model.kernel.gamma = options.gamma ? *options.gamma : default_gamma(x);
  model.kernel.degree = options.degree;
  model.kernel.coef0 = options.coef0;

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = labels[static_cast<std::size_t>(i)] == model.positive_label ? 1.0 : -1.0;
  }
  Eigen::MatrixXd kmat(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      kmat(i, j) = kmat(j, i) = model.kernel(x.row(i), x.row(j));
    }
  }

  const double c = options.c;
  const double eps = options.tolerance;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);
  const auto upper = [&](Eigen::Index t) { return alpha[t] >= c; };
  const auto lower = [&](Eigen::Index t) { return alpha[t] <= 0.0; };

  long iter = 0;
  for (;; ++iter) {
    if (iter >= options.max_iterations) {
      throw ConvergenceError(
          fmt::format("SMO did not reach tolerance {} in {} iterations", eps, iter), iter);
    }
    double gmax = -std::numeric_limits<double>::infinity();
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          i = t;
        }
      } else if (!lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index j = -1;
    double best_obj = std::numeric_limits<double>::infinity();
    if (i >= 0) {
      for (Eigen::Index t = 0; t < n; ++t) {
        const double qit = y[i] * y[t] * kmat(i, t);
        if (y[t] > 0) {
          if (lower(t)) continue;
          const double diff = gmax + grad[t];
          gmax2 = std::max(gmax2, grad[t]);
          if (diff > 0) {
            double quad = kmat(i, i) + kmat(t, t) - 2.0 * y[i] * qit;
            if (quad <= 0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj <= best_obj) {
              j = t;
              best_obj = obj;
            }
          }
        } else {
          if (upper(t)) continue;
          const double diff = gmax - grad[t];
          gmax2 = std::max(gmax2, -grad[t]);
          if (diff > 0) {
            double quad = kmat(i, i) + kmat(t, t) + 2.0 * y[i] * qit;
            if (quad <= 0) quad = kTau;
            const double obj = -(diff * diff) / quad;
            if (obj <= best_obj) {
              j = t;
              best_obj = obj;
            }
          }
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < eps) break;

    const double qij = y[i] * y[j] * kmat(i, j);
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = kmat(i, i) + kmat(j, j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = kmat(i, i) + kmat(j, j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (Eigen::Index t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * kmat(t, i) * dai + y[j] * kmat(t, j) * daj);
    }
  }

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / free_count : 0.5 * (ub + lb);

  model.bias = -rho;
  model.iterations = iter;
  model.alpha = alpha;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] > 1e-8) model.support_index.push_back(static_cast<int>(t));
  }
  const auto sv = static_cast<Eigen::Index>(model.support_index.size());
  model.support_vectors.resize(sv, x.cols());
  model.dual_coef.resize(sv);
  for (Eigen::Index s = 0; s < sv; ++s) {
    const auto t = model.support_index[static_cast<std::size_t>(s)];
    model.support_vectors.row(s) = x.row(t);
    model.dual_coef[s] = alpha[t] * y[t];
  }
  return model;
}

double svm_kkt_violation(const SvmModel& model, const Eigen::MatrixXd& x,
                         const std::vector<int>& labels) {
  double worst = 0.0;
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    const double yt = labels[static_cast<std::size_t>(t)] == model.positive_label ? 1.0 : -1.0;
    const double margin = yt * model.decision(x.row(t));
    const double a = model.alpha[t];
    double v = 0.0;
    if (a <= 1e-8) v = std::max(0.0, 1.0 - margin);
    else if (a >= model.c - 1e-8) v = std::max(0.0, margin - 1.0);
    else v = std::abs(margin - 1.0);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace sbench
