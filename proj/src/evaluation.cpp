// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "sbench/error.hpp"
#include "sbench/random.hpp"
#include "sbench/seed.hpp"

namespace sbench {

SplitPlan SplitPlan::kfold(int k, int n_repeats, std::uint64_t seed) {
  SplitPlan plan;
  plan.mode = Mode::KFold;
  plan.k = k;
  plan.n_repeats = n_repeats;
  plan.seed = seed;
  return plan;
}

SplitPlan SplitPlan::holdout(double test_fraction, int n_repeats, std::uint64_t seed) {
  SplitPlan plan;
  plan.mode = Mode::Holdout;
  plan.test_fraction = test_fraction;
  plan.n_repeats = n_repeats;
  plan.seed = seed;
  return plan;
}

std::string SplitPlan::name() const { return mode == Mode::KFold ? "kfold" : "holdout"; }

void SplitPlan::validate() const {
  if (n_repeats < 1) throw ConfigError(fmt::format("{}.repeats must be >= 1", name()));
  if (mode == Mode::KFold && k < 2) throw ConfigError("kfold.k must be >= 2");
  if (mode == Mode::Holdout && !(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ConfigError("holdout.test_fraction must lie in (0, 1)");
  }
}

namespace {

std::map<int, std::vector<std::size_t>> indices_by_label(const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  return groups;
}

}  // namespace

std::vector<Split> make_splits(const std::vector<int>& labels, const SplitPlan& plan) {
  plan.validate();
  const auto groups = indices_by_label(labels);
  if (groups.empty()) throw DataError("cannot split an empty dataset");
  std::vector<Split> splits;

  if (plan.mode == SplitPlan::Mode::KFold) {
    const auto k = static_cast<std::size_t>(plan.k);
    for (const auto& [label, idx] : groups) {
      if (idx.size() < k) {
        throw DataError(fmt::format(
            "stratified {}-fold impossible: label {} has only {} instances", k, label, idx.size()));
      }
    }
    for (int rep = 0; rep < plan.n_repeats; ++rep) {
      Rng rng(SeedKey(plan.seed).add("kfold").add(static_cast<std::uint64_t>(rep)).value());
      std::vector<int> fold_of(labels.size(), 0);
      std::size_t dealt = 0;
      for (const auto& [label, idx] : groups) {
        auto shuffled = idx;
        rng.shuffle(std::span<std::size_t>(shuffled));
        for (auto i : shuffled) fold_of[i] = static_cast<int>(dealt++ % k);
      }
      for (std::size_t f = 0; f < k; ++f) {
        Split s;
        s.replication = rep;
        s.fold = static_cast<int>(f);
        for (std::size_t i = 0; i < labels.size(); ++i) {
          (static_cast<std::size_t>(fold_of[i]) == f ? s.test : s.train).push_back(i);
        }
        splits.push_back(std::move(s));
      }
    }
    return splits;
  }

  for (const auto& [label, idx] : groups) {
    const auto n_test = std::llround(plan.test_fraction * static_cast<double>(idx.size()));
    if (n_test < 1 || n_test >= static_cast<long long>(idx.size())) {
      throw DataError(fmt::format(
          "stratified holdout impossible: label {} has {} instances for test fraction {}", label,
          idx.size(), plan.test_fraction));
    }
  }
  for (int rep = 0; rep < plan.n_repeats; ++rep) {
    Rng rng(SeedKey(plan.seed).add("holdout").add(static_cast<std::uint64_t>(rep)).value());
    std::vector<bool> in_test(labels.size(), false);
    for (const auto& [label, idx] : groups) {
      auto shuffled = idx;
      rng.shuffle(std::span<std::size_t>(shuffled));
      const auto n_test = static_cast<std::size_t>(
          std::llround(plan.test_fraction * static_cast<double>(idx.size())));
      for (std::size_t t = 0; t < n_test; ++t) in_test[shuffled[t]] = true;
    }
    Split s;
    s.replication = rep;
    for (std::size_t i = 0; i < labels.size(); ++i) (in_test[i] ? s.test : s.train).push_back(i);
    splits.push_back(std::move(s));
  }
  return splits;
}

ConfusionMatrix confusion(const std::vector<int>& truth, const std::vector<int>& predicted,
                          int positive_label) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("truth and prediction lengths differ");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == positive_label;
    const bool said = predicted[i] == positive_label;
    if (actual && said) ++cm.tp;
    else if (actual) ++cm.fn;
    else if (said) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

Metrics confusion_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw std::invalid_argument("empty confusion matrix");
  Metrics m;
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  if (cm.tp + cm.fn > 0) {
    m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  if (cm.tn + cm.fp > 0) {
    m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  }
  return m;
}

Preprocessor Preprocessor::fit(const Eigen::MatrixXd& train, Extractor extractor,
                               const PreprocessConfig& config) {
  Preprocessor p;
  Eigen::MatrixXd data;
  if (config.standardize) {
    p.scaler = Standardizer::fit(train);
    data = p.scaler->apply(train);
  }
  const bool use_pca = config.pca && (config.pca_on_wfe || extractor != Extractor::Wfe);
  if (use_pca) {
    p.pca = pca_fit(config.standardize ? data : train, config.variance_target);
    if (p.pca->retained == 0) {
      throw DataError("training features have zero variance; PCA retained nothing");
    }
  }
  return p;
}

Eigen::MatrixXd Preprocessor::apply(const Eigen::MatrixXd& data) const {
  if (scaler && pca) return pca_apply(*pca, scaler->apply(data));
  if (scaler) return scaler->apply(data);
  if (pca) return pca_apply(*pca, data);
  return data;
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

std::vector<int> take(const std::vector<int>& v, const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(v[r]);
  return out;
}

std::optional<double> mean_of_present(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

std::vector<PreparedSplit> prepare_splits(const FeatureMatrix& features,
                                          const std::vector<Split>& splits,
                                          const PreprocessConfig& config) {
  std::vector<PreparedSplit> out;
  out.reserve(splits.size());
  for (const auto& s : splits) {
    const Eigen::MatrixXd train = take_rows(features.values, s.train);
    const auto pre = Preprocessor::fit(train, features.extractor, config);
    PreparedSplit p;
    p.replication = s.replication;
    p.fold = s.fold;
    p.train_x = pre.apply(train);
    p.test_x = pre.apply(take_rows(features.values, s.test));
    p.train_y = take(features.labels, s.train);
    p.test_y = take(features.labels, s.test);
    out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t model_seed(const CellContext& context, Extractor extractor, ModelKind model,
                         const std::string& plan, int replication, int fold) {
  return SeedKey(context.master_seed)
      .add(to_string(extractor))
      .add(to_string(model))
      .add(to_string(context.scheme))
      .add(plan)
      .add(static_cast<std::uint64_t>(replication))
      .add(static_cast<std::uint64_t>(fold))
      .value();
}

CellResult evaluate_model(const std::vector<PreparedSplit>& prepared, Extractor extractor,
                          ModelKind model, const Hyperparams& params, const SplitPlan& plan,
                          const CellContext& context) {
  CellResult cell;
  cell.scheme = context.scheme;
  cell.extractor = extractor;
  cell.model = model;
  cell.plan = plan.name();

  struct Accumulator {
    std::vector<double> accuracy;
    std::vector<std::optional<double>> sensitivity;
    std::vector<std::optional<double>> specificity;
  };
  std::map<int, Accumulator> by_rep;
  double dims = 0.0;
  for (const auto& split : prepared) {
    try {
      const auto seed =
          model_seed(context, extractor, model, cell.plan, split.replication, split.fold);
      const auto fitted = fit_model(model, split.train_x, split.train_y, params, seed);
      if (cell.model_summary.empty()) cell.model_summary = fitted.summary();
      const auto m = confusion_metrics(confusion(split.test_y, fitted.predict(split.test_x)));
      auto& acc = by_rep[split.replication];
      acc.accuracy.push_back(m.accuracy);
      acc.sensitivity.push_back(m.sensitivity);
      acc.specificity.push_back(m.specificity);
      dims += static_cast<double>(split.train_x.cols());
    } catch (const std::exception& e) {
      throw CellError(fmt::format("cell {}/{}/{} {} replication {} fold {}: {}",
                                  to_string(context.scheme), to_string(extractor),
                                  to_string(model), cell.plan, split.replication, split.fold,
                                  e.what()));
    }
  }
  if (!prepared.empty()) dims /= static_cast<double>(prepared.size());
  cell.mean_dimensions = dims;
  for (const auto& [rep, acc] : by_rep) {
    ReplicationMetrics r;
    r.replication = rep;
    double sum = 0.0;
    for (double a : acc.accuracy) sum += a;
    r.accuracy = sum / static_cast<double>(acc.accuracy.size());
    r.sensitivity = mean_of_present(acc.sensitivity);
    r.specificity = mean_of_present(acc.specificity);
    cell.replications.push_back(r);
  }
  return cell;
}

CellResult run_cell(const FeatureMatrix& features, ModelKind model, const Hyperparams& params,
                    const SplitPlan& plan, const PreprocessConfig& preprocess,
                    const CellContext& context) {
  const auto splits = make_splits(features.labels, plan);
  std::vector<PreparedSplit> prepared;
  try {
    prepared = prepare_splits(features, splits, preprocess);
  } catch (const std::exception& e) {
    throw CellError(fmt::format("cell {}/{}/{} {} preprocessing: {}", to_string(context.scheme),
                                to_string(features.extractor), to_string(model), plan.name(),
                                e.what()));
  }
  return evaluate_model(prepared, features.extractor, model, params, plan, context);
}

CellResult run_cell(const LabeledDataset& dataset, Extractor extractor, ModelKind model,
                    const Hyperparams& params, const SplitPlan& plan,
                    const FeatureConfig& features, const PreprocessConfig& preprocess,
                    std::uint64_t master_seed) {
  const auto matrix = extract_matrix(dataset, extractor, features);
  return run_cell(matrix, model, params, plan, preprocess, CellContext{dataset.scheme, master_seed});
}

std::string format_double(double value) { return fmt::format("{}", value); }

std::vector<LongRow> to_long_rows(const std::vector<CellResult>& cells) {
  std::vector<LongRow> rows;
  for (const auto& cell : cells) {
    for (const auto& r : cell.replications) {
      rows.push_back(LongRow{std::string(to_string(cell.scheme)),
                             std::string(to_string(cell.extractor)), to_string(cell.model),
                             r.replication, r.accuracy, r.sensitivity, r.specificity});
    }
  }
  return rows;
}

namespace {

constexpr std::string_view kLongHeader =
    "scheme,extractor,model,replication,accuracy,sensitivity,specificity";

std::string optional_text(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, std::size_t line_no, std::string_view column) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw DataError(fmt::format("line {}: bad {} value '{}'", line_no, column, text));
  }
  return value;
}

}  // namespace

void write_long_csv(std::ostream& out, const std::vector<LongRow>& rows) {
  out << kLongHeader << '\n';
  for (const auto& r : rows) {
    out << r.scheme << ',' << r.extractor << ',' << r.model << ',' << r.replication << ','
        << format_double(r.accuracy) << ',' << optional_text(r.sensitivity) << ','
        << optional_text(r.specificity) << '\n';
  }
}

std::vector<LongRow> read_long_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kLongHeader) {
    throw DataError(fmt::format("unexpected header '{}', expected '{}'", line, kLongHeader));
  }
  std::vector<LongRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) {
      throw DataError(fmt::format("line {}: expected 7 fields, found {}", line_no, f.size()));
    }
    LongRow r;
    r.scheme = f[0];
    r.extractor = f[1];
    r.model = f[2];
    const auto rep = parse_double(f[3], line_no, "replication");
    if (rep < 0 || rep != std::floor(rep)) {
      throw DataError(fmt::format("line {}: bad replication '{}'", line_no, f[3]));
    }
    r.replication = static_cast<int>(rep);
    r.accuracy = parse_double(f[4], line_no, "accuracy");
    if (!f[5].empty()) r.sensitivity = parse_double(f[5], line_no, "sensitivity");
    if (!f[6].empty()) r.specificity = parse_double(f[6], line_no, "specificity");
    rows.push_back(std::move(r));
  }
  return rows;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace sbench
