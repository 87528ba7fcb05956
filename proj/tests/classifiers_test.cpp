// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "sbench/classifiers.hpp"
#include "sbench/error.hpp"
#include "sbench/random.hpp"
#include "test_support.hpp"

namespace sbench {
namespace {

using testing::random_matrix;

Eigen::MatrixXd column(std::initializer_list<double> values) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

double accuracy(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return static_cast<double>(hit) / static_cast<double>(a.size());
}

// Two Gaussian clouds in d dimensions, label 0 centered at 0, label 1 at `shift` on every axis.
struct Blobs {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Blobs blobs(int per_label, int d, double shift, std::uint64_t seed) {
  Blobs b;
  b.x = random_matrix(2 * per_label, d, seed);
  for (int i = 0; i < 2 * per_label; ++i) {
    const int label = i < per_label ? 0 : 1;
    if (label == 1) b.x.row(i).array() += shift;
    b.y.push_back(label);
  }
  return b;
}

// Mixed labels with a noisy linear boundary.
Blobs noisy(int n, int d, std::uint64_t seed) {
  Blobs b;
  b.x = random_matrix(n, d, seed);
  Rng rng(seed + 1);
  for (int i = 0; i < n; ++i) {
    b.y.push_back(b.x(i, 0) + 0.5 * b.x(i, d - 1) + 0.7 * rng.normal() > 0.0 ? 1 : 0);
  }
  return b;
}

TEST(Lda, SymmetricBoundary) {
  const auto x = column({-2, -1, 0, 1, 2, 3});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto m = lda_fit(x, y);
  EXPECT_EQ(m.predict(column({-0.5}))[0], 0);
  EXPECT_EQ(m.predict(column({0.49}))[0], 0);
  EXPECT_EQ(m.predict(column({0.51}))[0], 1);

  const auto given = LdaModel::from_parameters({0, 1}, column({-1, 1}),
                                               Eigen::MatrixXd::Identity(1, 1), {0.5, 0.5});
  const Eigen::MatrixXd g = given.discriminants(column({0.0}));
  EXPECT_NEAR(g(0, 0), g(0, 1), 1e-15);
  EXPECT_EQ(given.predict(column({-0.5}))[0], 0);
  EXPECT_EQ(given.predict(column({0.5}))[0], 1);
}

TEST(Lda, SeparatedBlobs) {
  const auto b = blobs(50, 2, 10.0 / std::sqrt(2.0), 3);
  EXPECT_EQ(accuracy(lda_fit(b.x, b.y).predict(b.x), b.y), 1.0);
}

TEST(Lda, MatchesDirectFormula) {
  const auto b = noisy(50, 3, 17);
  const auto m = lda_fit(b.x, b.y, 0.0);
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(3, 3);
  std::vector<Eigen::RowVectorXd> mu(2, Eigen::RowVectorXd::Zero(3));
  std::vector<double> count(2, 0.0);
  for (int i = 0; i < 50; ++i) {
    mu[b.y[i]] += b.x.row(i);
    count[b.y[i]] += 1.0;
  }
  for (int k = 0; k < 2; ++k) mu[k] /= count[k];
  for (int i = 0; i < 50; ++i) {
    const Eigen::RowVectorXd d = b.x.row(i) - mu[b.y[i]];
    pooled += d.transpose() * d;
  }
  pooled /= 48.0;
  const Eigen::MatrixXd inv = pooled.inverse();
  const Eigen::MatrixXd g = m.discriminants(b.x);
  for (int i = 0; i < 50; ++i) {
    for (int k = 0; k < 2; ++k) {
      const double expected = (mu[k] * inv * b.x.row(i).transpose())(0) -
                              0.5 * (mu[k] * inv * mu[k].transpose())(0) +
                              std::log(count[k] / 50.0);
      EXPECT_NEAR(g(i, k), expected, 1e-8);
    }
  }
}

TEST(Lda, ArgmaxInvariantUnderAffineRescaling) {
  const auto b = noisy(80, 3, 5);
  const auto m = lda_fit(b.x, b.y);
  const Eigen::MatrixXd g = m.discriminants(b.x);
  const Eigen::MatrixXd shifted = (3.7 * g).array() + 42.0;
  EXPECT_EQ(argmax_labels(g, m.classes), argmax_labels(shifted, m.classes));
  EXPECT_EQ(argmax_labels(g, m.classes), m.predict(b.x));
}

TEST(Lda, RejectsSingletonLabel) {
  const auto x = column({0, 1, 2});
  EXPECT_THROW(lda_fit(x, {0, 0, 1}), std::invalid_argument);
}

TEST(Qda, VarianceRatioBoundary) {
  const auto m = QdaModel::from_parameters({0, 1}, {Eigen::RowVectorXd::Zero(1), Eigen::RowVectorXd::Zero(1)},
                                           {Eigen::MatrixXd::Constant(1, 1, 1.0),
                                            Eigen::MatrixXd::Constant(1, 1, 4.0)},
                                           {0.5, 0.5});
  const double edge = std::sqrt((8.0 / 3.0) * std::log(2.0));
  EXPECT_NEAR(edge, 1.3595559868917453, 1e-15);
  for (double sign : {-1.0, 1.0}) {
    EXPECT_EQ(m.predict(column({sign * (edge - 1e-6)}))[0], 0);
    EXPECT_EQ(m.predict(column({sign * (edge + 1e-6)}))[0], 1);
  }
  const Eigen::MatrixXd g = m.discriminants(column({edge}));
  EXPECT_NEAR(g(0, 0), g(0, 1), 1e-12);
}

TEST(Qda, EqualCovariancesMatchLda) {
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.6, 0.6, 1.0;
  Eigen::MatrixXd means(2, 2);
  means << 0.0, 0.0, 1.5, -0.5;
  const auto lda = LdaModel::from_parameters({0, 1}, means, cov, {0.3, 0.7});
  const auto qda = QdaModel::from_parameters({0, 1}, {means.row(0), means.row(1)}, {cov, cov},
                                             {0.3, 0.7});
  const Eigen::MatrixXd probe = 3.0 * random_matrix(500, 2, 8);
  EXPECT_EQ(lda.predict(probe), qda.predict(probe));
}

TEST(Qda, MatchesDirectFormula) {
  const auto b = noisy(50, 3, 23);
  const auto m = qda_fit(b.x, b.y, 0.0);
  const Eigen::MatrixXd g = m.discriminants(b.x);
  for (int k = 0; k < 2; ++k) {
    std::vector<int> rows;
    for (int i = 0; i < 50; ++i) {
      if (b.y[i] == k) rows.push_back(i);
    }
    const double nk = static_cast<double>(rows.size());
    Eigen::RowVectorXd mu = Eigen::RowVectorXd::Zero(3);
    for (int i : rows) mu += b.x.row(i);
    mu /= nk;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
    for (int i : rows) cov += (b.x.row(i) - mu).transpose() * (b.x.row(i) - mu);
    cov /= nk - 1.0;
    const Eigen::MatrixXd inv = cov.inverse();
    for (int i = 0; i < 50; ++i) {
      const Eigen::RowVectorXd d = b.x.row(i) - mu;
      const double expected = -0.5 * std::log(cov.determinant()) -
                              0.5 * (d * inv * d.transpose())(0) + std::log(nk / 50.0);
      EXPECT_NEAR(g(i, k), expected, 1e-8);
    }
  }
}

TEST(Qda, SingularWithoutRidge) {
  Eigen::MatrixXd x(6, 2);
  x << 0, 0, 1, 1, 2, 2, 5, 1, 6, 2, 7, 3;
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  EXPECT_ANY_THROW(qda_fit(x, y, 0.0));
  EXPECT_NO_THROW(qda_fit(x, y, 1e-6));
}

TEST(NaiveBayes, SymmetricBoundary) {
  const auto x = column({-2, -1, 0, 0, 1, 2});
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto m = naive_bayes_fit(x, y);
  EXPECT_EQ(m.predict(column({-0.01}))[0], 0);
  EXPECT_EQ(m.predict(column({0.01}))[0], 1);
}

TEST(NaiveBayes, FourPointTable) {
  // Means 1 and 5, population variances 1, equal priors.
  const auto x = column({0, 2, 4, 6});
  const std::vector<int> y{0, 0, 1, 1};
  const auto m = naive_bayes_fit(x, y);
  const Eigen::MatrixXd p = m.posteriors(column({0, 3, 4.5}));
  const auto post0 = [](double v) {
    const double a = std::exp(-0.5 * (v - 1) * (v - 1));
    const double b = std::exp(-0.5 * (v - 5) * (v - 5));
    return a / (a + b);
  };
  EXPECT_NEAR(p(0, 0), post0(0.0), 1e-10);
  EXPECT_NEAR(p(1, 0), 0.5, 1e-10);
  EXPECT_NEAR(p(2, 0), post0(4.5), 1e-10);
  for (int r = 0; r < 3; ++r) EXPECT_NEAR(p(r, 0) + p(r, 1), 1.0, 1e-12);
}

TEST(NaiveBayes, DuplicatedFeaturePreservesPredictions) {
  const auto b = noisy(60, 2, 41);
  Eigen::MatrixXd wide(60, 3);
  wide << b.x, b.x.col(0);
  const auto narrow_pred = naive_bayes_fit(b.x, b.y).predict(b.x);
  const auto wide_model = naive_bayes_fit(wide, b.y);
  const auto narrow_model = naive_bayes_fit(b.x, b.y);
  const Eigen::MatrixXd delta = wide_model.log_joint(wide) - narrow_model.log_joint(b.x);
  EXPECT_GT(delta.cwiseAbs().maxCoeff(), 0.0);
  std::size_t agree = 0;
  const auto wide_pred = wide_model.predict(wide);
  for (std::size_t i = 0; i < 60; ++i) agree += wide_pred[i] == narrow_pred[i];
  EXPECT_GE(agree, 54u);
}

TEST(NaiveBayes, ConstantFeatureIsFloored) {
  Eigen::MatrixXd x(6, 2);
  x << 0, 1, 1, 1, 2, 1, 5, 1, 6, 1, 7, 1;
  const auto m = naive_bayes_fit(x, {0, 0, 0, 1, 1, 1});
  EXPECT_GT(m.variances.minCoeff(), 0.0);
  EXPECT_EQ(m.predict(x), (std::vector<int>{0, 0, 0, 1, 1, 1}));
}

class KnnFivePoints : public ::testing::Test {
 protected:
  Eigen::MatrixXd x = column({0, 1, 5, 6, 7});
  std::vector<int> y{0, 0, 1, 1, 0};
  int at(double q, int k) const { return knn_predict(x, y, column({q}).row(0), k); }
};

TEST_F(KnnFivePoints, SelfMatch) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    EXPECT_EQ(knn_predict(x, y, x.row(i), 1), y[static_cast<std::size_t>(i)]);
  }
}

TEST_F(KnnFivePoints, Majority) {
  EXPECT_EQ(at(5.4, 3), 1);
  EXPECT_EQ(at(0.6, 3), 0);
}

TEST_F(KnnFivePoints, AllNeighbors) {
  for (double q : {-10.0, 3.0, 5.5, 100.0}) EXPECT_EQ(at(q, 5), 0);
}

TEST_F(KnnFivePoints, TieGoesToNearest) {
  // Distances 3.2, 2.2, 1.8, 2.8: two votes each, nearest neighbor is 5.
  EXPECT_EQ(at(3.2, 4), 1);
  EXPECT_EQ(at(2.8, 4), 0);
  EXPECT_EQ(at(1.5, 2), 0);
}

TEST_F(KnnFivePoints, RejectsBadK) {
  EXPECT_THROW(at(1.0, 0), std::invalid_argument);
  EXPECT_THROW(at(1.0, 6), std::invalid_argument);
}

TEST(Svm, TwoPointLinear) {
  SvmOptions opt;
  opt.kernel = Kernel::Linear;
  opt.c = 1000.0;
  const auto m = svm_fit(column({-1, 1}), {-1, 1}, opt);
  ASSERT_EQ(m.alpha.size(), 2);
  EXPECT_NEAR(m.alpha(0), 0.5, 1e-9);
  EXPECT_NEAR(m.alpha(1), 0.5, 1e-9);
  EXPECT_NEAR(m.bias, 0.0, 1e-9);
  EXPECT_NEAR(m.decision(column({0.0}).row(0)), 0.0, 1e-9);
  // w = 1, so the margin 2/|w| is 2.
  EXPECT_NEAR(m.decision(column({1.0}).row(0)) - m.decision(column({0.0}).row(0)), 1.0, 1e-9);
  EXPECT_EQ(m.predict(column({-0.1, 0.1})), (std::vector<int>{-1, 1}));
}

TEST(Svm, XorWithRbf) {
  Eigen::MatrixXd x(4, 2);
  x << -1, -1, 1, 1, -1, 1, 1, -1;
  const std::vector<int> y{1, 1, 0, 0};
  SvmOptions opt;
  opt.gamma = 1.0;
  opt.c = 10.0;
  const auto m = svm_fit(x, y, opt);
  EXPECT_EQ(m.predict(x), y);
}

TEST(Svm, KktConditionsAtConvergence) {
  for (Kernel kernel : {Kernel::Rbf, Kernel::Linear, Kernel::Poly}) {
    const auto b = noisy(120, 3, 77);
    SvmOptions opt;
    opt.kernel = kernel;
    opt.c = 2.0;
    const auto m = svm_fit(b.x, b.y, opt);
    double balance = 0.0;
    for (Eigen::Index i = 0; i < m.alpha.size(); ++i) {
      EXPECT_GE(m.alpha(i), 0.0);
      EXPECT_LE(m.alpha(i), opt.c);
      balance += m.alpha(i) * (b.y[static_cast<std::size_t>(i)] == m.positive_label ? 1.0 : -1.0);
    }
    EXPECT_NEAR(balance, 0.0, 1e-6) << to_string(kernel);
    EXPECT_NEAR(m.dual_coef.sum(), 0.0, 1e-6);
    EXPECT_LE(svm_kkt_violation(m, b.x, b.y), 1e-3) << to_string(kernel);
    for (int i : m.support_index) EXPECT_GT(m.alpha(i), 1e-8);
  }
}

TEST(Svm, NonConvergenceReportsIterations) {
  const auto b = noisy(60, 2, 3);
  SvmOptions opt;
  opt.max_iterations = 3;
  try {
    svm_fit(b.x, b.y, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 3);
  }
}

TEST(Svm, RequiresBothLabels) {
  EXPECT_THROW(svm_fit(column({0, 1, 2}), {1, 1, 1}, {}), std::invalid_argument);
}

TEST(Forest, PureLabels) {
  const auto x = random_matrix(30, 4, 1);
  const std::vector<int> y(30, 1);
  ForestOptions opt;
  opt.n_trees = 10;
  const auto m = rf_fit(x, y, opt, 5);
  for (const auto& tree : m.trees) EXPECT_EQ(tree.leaf_count(), 1u);
  EXPECT_EQ(m.predict(x), y);
}

TEST(Forest, SameSeedSameForest) {
  const auto b = noisy(100, 5, 2);
  ForestOptions opt;
  opt.n_trees = 25;
  const auto a = rf_fit(b.x, b.y, opt, 99);
  const auto c = rf_fit(b.x, b.y, opt, 99);
  const auto probe = random_matrix(200, 5, 3);
  EXPECT_EQ(a.predict(probe), c.predict(probe));
  ASSERT_EQ(a.trees.size(), c.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    ASSERT_EQ(a.trees[t].nodes.size(), c.trees[t].nodes.size());
    for (std::size_t n = 0; n < a.trees[t].nodes.size(); ++n) {
      EXPECT_EQ(a.trees[t].nodes[n].feature, c.trees[t].nodes[n].feature);
      EXPECT_EQ(a.trees[t].nodes[n].threshold, c.trees[t].nodes[n].threshold);
    }
  }
}

TEST(Forest, SingleTreeIsPlainCart) {
  // Labels switch at 8 with a lone 0 at 15. Tracing Gini by hand: the root
  // splits at 7.5, the right child at 14.5 and its right child at 15.5.
  Eigen::MatrixXd x(20, 1);
  std::vector<int> y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = i;
    y[static_cast<std::size_t>(i)] = (i >= 8 && i != 15) ? 1 : 0;
  }
  std::vector<std::size_t> rows(20);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto tree = fit_classification_tree(x, y, rows, TreeOptions{}, nullptr);
  std::set<double> thresholds;
  for (const auto& node : tree.nodes) {
    if (!node.leaf()) thresholds.insert(node.threshold);
  }
  EXPECT_EQ(thresholds, (std::set<double>{7.5, 14.5, 15.5}));
  EXPECT_EQ(tree.nodes.front().threshold, 7.5);

  ForestOptions opt;
  opt.n_trees = 1;
  opt.max_features = 1;
  opt.bootstrap = false;
  const auto forest = rf_fit(x, y, opt, 4);
  Eigen::MatrixXd probe(6, 1);
  probe << 7.4, 7.6, 14.2, 14.8, 15.2, 15.8;
  const std::vector<int> expected{0, 1, 1, 0, 0, 1};
  EXPECT_EQ(forest.predict(probe), expected);
  for (Eigen::Index r = 0; r < probe.rows(); ++r) {
    EXPECT_EQ(static_cast<int>(tree.evaluate(probe.row(r))), expected[static_cast<std::size_t>(r)]);
  }
  EXPECT_EQ(forest.predict(x), y);
}

TEST(Boosting, IdenticalLabels) {
  const auto x = random_matrix(40, 3, 6);
  for (int label : {0, 1}) {
    const std::vector<int> y(40, label);
    const auto m = gb_fit(x, y, {}, 1);
    EXPECT_EQ(m.predict(random_matrix(25, 3, 7)), std::vector<int>(25, label));
  }
}

TEST(Boosting, ZeroLearningRateGivesPriorMajority) {
  const auto x = random_matrix(100, 2, 9);
  std::vector<int> y(100, 0);
  std::fill(y.begin(), y.begin() + 30, 1);
  BoostingOptions opt;
  opt.learning_rate = 0.0;
  const auto m = gb_fit(x, y, opt, 1);
  EXPECT_EQ(m.predict(random_matrix(50, 2, 10)), std::vector<int>(50, 0));
  EXPECT_NEAR(m.initial_score, std::log(30.0 / 70.0), 1e-12);
}

TEST(Boosting, TrainingLossNonIncreasing) {
  const auto b = noisy(100, 3, 12);
  for (double lr : {0.1, 0.5, 1.0}) {
    BoostingOptions opt;
    opt.learning_rate = lr;
    opt.n_stages = 50;
    const auto m = gb_fit(b.x, b.y, opt, 1);
    ASSERT_EQ(m.loss_trajectory.size(), 51u);
    for (std::size_t s = 1; s < m.loss_trajectory.size(); ++s) {
      EXPECT_LE(m.loss_trajectory[s], m.loss_trajectory[s - 1] + 1e-12) << lr << ' ' << s;
    }
  }
}

TEST(Boosting, SubsampleDeterministic) {
  const auto b = noisy(100, 3, 13);
  BoostingOptions opt;
  opt.subsample = 0.6;
  const auto probe = random_matrix(50, 3, 14);
  EXPECT_EQ(gb_fit(b.x, b.y, opt, 8).score(probe), gb_fit(b.x, b.y, opt, 8).score(probe));
}

TEST(Contract, PredictionsUseTrainingLabels) {
  auto b = noisy(80, 4, 21);
  for (auto& v : b.y) v = v == 1 ? 7 : 3;
  Hyperparams params;
  params.rf.n_trees = 15;
  params.gb.n_stages = 15;
  const auto probe = 4.0 * random_matrix(60, 4, 22);
  for (ModelKind kind : kAllModels) {
    const auto model = fit_model(kind, b.x, b.y, params, 5);
    for (int label : model.predict(probe)) {
      EXPECT_TRUE(label == 3 || label == 7) << to_string(kind) << ' ' << label;
    }
    EXPECT_GE(accuracy(model.predict(b.x), b.y), 0.7) << to_string(kind);
    EXPECT_FALSE(model.summary().empty());
  }
}

TEST(Contract, SeededModelsAreDeterministic) {
  const auto b = noisy(80, 4, 31);
  Hyperparams params;
  params.rf.n_trees = 20;
  params.gb.n_stages = 20;
  params.gb.subsample = 0.7;
  const auto probe = random_matrix(60, 4, 32);
  for (ModelKind kind : kAllModels) {
    EXPECT_EQ(fit_model(kind, b.x, b.y, params, 5).predict(probe),
              fit_model(kind, b.x, b.y, params, 5).predict(probe))
        << to_string(kind);
  }
}

TEST(Contract, DistanceModelsAreStandardized) {
  const auto b = noisy(40, 2, 1);
  const Hyperparams params;
  EXPECT_TRUE(fit_model(ModelKind::Knn, b.x, b.y, params, 0).scaler.has_value());
  EXPECT_TRUE(fit_model(ModelKind::Svm, b.x, b.y, params, 0).scaler.has_value());
  EXPECT_FALSE(fit_model(ModelKind::Lda, b.x, b.y, params, 0).scaler.has_value());
  EXPECT_FALSE(fit_model(ModelKind::Rf, b.x, b.y, params, 0).scaler.has_value());
}

TEST(Contract, ModelNames) {
  for (ModelKind kind : kAllModels) EXPECT_EQ(parse_model(to_string(kind)), kind);
  EXPECT_EQ(parse_model("knn"), ModelKind::Knn);
  EXPECT_THROW(parse_model("mlp"), std::invalid_argument);
}

TEST(Hyperparams, Validation) {
  EXPECT_NO_THROW(Hyperparams{}.validate());
  Hyperparams p;
  p.knn_k = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.svm.c = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.gb.learning_rate = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.gb.learning_rate = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.rf.n_trees = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace sbench
