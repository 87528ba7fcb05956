// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace sbench {

std::vector<int> distinct_labels(const std::vector<int>& y) {
  std::vector<int> classes(y.begin(), y.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

std::vector<int> argmax_labels(const Eigen::MatrixXd& scores, const std::vector<int>& classes) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(r, c) > scores(r, best)) best = c;
    }
    out[static_cast<std::size_t>(r)] = classes[static_cast<std::size_t>(best)];
  }
  return out;
}

namespace {

void check_shapes(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw std::invalid_argument(
        fmt::format("{} rows but {} labels", x.rows(), y.size()));
  }
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("empty training matrix");
}

std::vector<std::vector<Eigen::Index>> rows_by_class(const std::vector<int>& y,
                                                     const std::vector<int>& classes) {
  std::vector<std::vector<Eigen::Index>> rows(classes.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), y[i]) - classes.begin());
    rows[k].push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

std::vector<double> frequency_priors(const std::vector<std::vector<Eigen::Index>>& rows,
                                     std::size_t n) {
  std::vector<double> priors;
  for (const auto& r : rows) priors.push_back(static_cast<double>(r.size()) / static_cast<double>(n));
  return priors;
}

void add_ridge(Eigen::MatrixXd& cov, double ridge) {
  const double scale = cov.trace() / static_cast<double>(cov.rows());
  cov.diagonal().array() += ridge * scale;
}

void check_priors(const std::vector<double>& priors, std::size_t classes) {
  if (priors.size() != classes) throw std::invalid_argument("one prior per class required");
  double sum = 0.0;
  for (double p : priors) {
    if (!(p > 0.0)) throw std::invalid_argument("class priors must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("class priors must sum to 1");
}

}  // namespace

LdaModel LdaModel::from_parameters(std::vector<int> classes, Eigen::MatrixXd means,
                                   Eigen::MatrixXd covariance, std::vector<double> priors) {
  check_priors(priors, classes.size());
  LdaModel m;
  m.classes = std::move(classes);
  m.means = std::move(means);
  m.covariance = std::move(covariance);
  m.priors = std::move(priors);

  Eigen::LLT<Eigen::MatrixXd> llt(m.covariance);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("LDA pooled covariance is singular; increase the ridge");
  }
  m.weights_ = llt.solve(m.means.transpose());
  m.bias_.resize(static_cast<Eigen::Index>(m.classes.size()));
  for (Eigen::Index k = 0; k < m.bias_.size(); ++k) {
    m.bias_[k] = -0.5 * m.means.row(k).dot(m.weights_.col(k)) +
                 std::log(m.priors[static_cast<std::size_t>(k)]);
  }
  return m;
}

Eigen::MatrixXd LdaModel::discriminants(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd g = x * weights_;
  g.rowwise() += bias_;
  return g;
}

std::vector<int> LdaModel::predict(const Eigen::MatrixXd& x) const {
  return argmax_labels(discriminants(x), classes);
}

LdaModel lda_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, double ridge,
                 const std::optional<std::vector<double>>& priors) {
  check_shapes(x, y);
  const auto classes = distinct_labels(y);
  const auto rows = rows_by_class(y, classes);
  const auto d = x.cols();
  Eigen::MatrixXd means(static_cast<Eigen::Index>(classes.size()), d);
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (rows[k].size() < 2) {
      throw std::invalid_argument(
          fmt::format("LDA needs at least 2 samples of label {}", classes[k]));
    }
    const Eigen::MatrixXd xk = gather(x, rows[k]);
    means.row(static_cast<Eigen::Index>(k)) = xk.colwise().mean();
    const Eigen::MatrixXd centered = xk.rowwise() - means.row(static_cast<Eigen::Index>(k));
    scatter += centered.transpose() * centered;
  }
  const auto dof = static_cast<double>(y.size() - classes.size());
  Eigen::MatrixXd cov = scatter / std::max(dof, 1.0);
  add_ridge(cov, ridge);
  return LdaModel::from_parameters(classes, std::move(means), std::move(cov),
                                   priors ? *priors : frequency_priors(rows, y.size()));
}

QdaModel QdaModel::from_parameters(std::vector<int> classes,
                                   std::vector<Eigen::RowVectorXd> means,
                                   std::vector<Eigen::MatrixXd> covariances,
                                   std::vector<double> priors) {
  check_priors(priors, classes.size());
  if (means.size() != classes.size() || covariances.size() != classes.size()) {
    throw std::invalid_argument("QDA needs one mean and covariance per class");
  }
  QdaModel m;
  m.classes = std::move(classes);
  m.priors = std::move(priors);
  for (std::size_t k = 0; k < m.classes.size(); ++k) {
    ClassStats s;
    s.mean = std::move(means[k]);
    s.covariance = std::move(covariances[k]);
    Eigen::LLT<Eigen::MatrixXd> llt(s.covariance);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(fmt::format(
          "QDA covariance of label {} is singular; a positive ridge is required", m.classes[k]));
    }
    const Eigen::MatrixXd lower = llt.matrixL();
    s.log_det = 2.0 * lower.diagonal().array().log().sum();
    s.precision = llt.solve(Eigen::MatrixXd::Identity(s.covariance.rows(), s.covariance.cols()));
    m.stats.push_back(std::move(s));
  }
  return m;
}

Eigen::MatrixXd QdaModel::discriminants(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd g(x.rows(), static_cast<Eigen::Index>(classes.size()));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const auto& s = stats[k];
    const Eigen::MatrixXd centered = x.rowwise() - s.mean;
    const Eigen::VectorXd mahalanobis =
        (centered * s.precision).cwiseProduct(centered).rowwise().sum();
    g.col(static_cast<Eigen::Index>(k)) =
        (-0.5 * s.log_det + std::log(priors[k])) - 0.5 * mahalanobis.array();
  }
  return g;
}

std::vector<int> QdaModel::predict(const Eigen::MatrixXd& x) const {
  return argmax_labels(discriminants(x), classes);
}

QdaModel qda_fit(const Eigen::MatrixXd& x, const std::vector<int>& y, double ridge) {
  check_shapes(x, y);
  const auto classes = distinct_labels(y);
  const auto rows = rows_by_class(y, classes);
  std::vector<Eigen::RowVectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (rows[k].size() < 2) {
      throw std::invalid_argument(
          fmt::format("QDA needs at least 2 samples of label {}", classes[k]));
    }
    const Eigen::MatrixXd xk = gather(x, rows[k]);
    Eigen::RowVectorXd mu = xk.colwise().mean();
    const Eigen::MatrixXd centered = xk.rowwise() - mu;
    Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(rows[k].size() - 1);
    add_ridge(cov, ridge);
    means.push_back(std::move(mu));
    covs.push_back(std::move(cov));
  }
  return QdaModel::from_parameters(classes, std::move(means), std::move(covs),
                                   frequency_priors(rows, y.size()));
}

Eigen::MatrixXd NaiveBayesModel::log_joint(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(classes.size()));
  for (Eigen::Index k = 0; k < out.cols(); ++k) {
    const Eigen::RowVectorXd var = variances.row(k);
    const double norm = -0.5 * (2.0 * std::numbers::pi * var.array()).log().sum();
    const Eigen::MatrixXd centered = x.rowwise() - means.row(k);
    const Eigen::VectorXd quad =
        (centered.array().square().rowwise() / var.array()).rowwise().sum();
    out.col(k) = (std::log(priors[static_cast<std::size_t>(k)]) + norm) - 0.5 * quad.array();
  }
  return out;
}

Eigen::MatrixXd NaiveBayesModel::posteriors(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd lj = log_joint(x);
  for (Eigen::Index r = 0; r < lj.rows(); ++r) {
    const double top = lj.row(r).maxCoeff();
    lj.row(r) = (lj.row(r).array() - top).exp();
    lj.row(r) /= lj.row(r).sum();
  }
  return lj;
}

std::vector<int> NaiveBayesModel::predict(const Eigen::MatrixXd& x) const {
  return argmax_labels(log_joint(x), classes);
}

NaiveBayesModel naive_bayes_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                double var_floor) {
  check_shapes(x, y);
  NaiveBayesModel m;
  m.classes = distinct_labels(y);
  const auto rows = rows_by_class(y, m.classes);
  const auto k_count = static_cast<Eigen::Index>(m.classes.size());
  m.means.resize(k_count, x.cols());
  m.variances.resize(k_count, x.cols());

  const Eigen::RowVectorXd overall_mean = x.colwise().mean();
  const double max_var = ((x.rowwise() - overall_mean).array().square().colwise().sum() /
                          static_cast<double>(x.rows()))
                             .maxCoeff();
  const double floor = std::max(var_floor * max_var, std::numeric_limits<double>::min());

  for (std::size_t k = 0; k < m.classes.size(); ++k) {
    if (rows[k].size() < 2) {
      throw std::invalid_argument(
          fmt::format("naive Bayes needs at least 2 samples of label {}", m.classes[k]));
    }
    const Eigen::MatrixXd xk = gather(x, rows[k]);
    const Eigen::RowVectorXd mu = xk.colwise().mean();
    const auto kk = static_cast<Eigen::Index>(k);
    m.means.row(kk) = mu;
    m.variances.row(kk) = ((xk.rowwise() - mu).array().square().colwise().sum() /
                           static_cast<double>(xk.rows()))
                              .cwiseMax(floor)
                              .matrix();
  }
  m.priors = frequency_priors(rows, y.size());
  return m;
}

}  // namespace sbench
