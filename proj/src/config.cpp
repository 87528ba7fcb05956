// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "sbench/error.hpp"

namespace sbench {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Profile profile) {
  return profile == Profile::Reproduction ? "reproduction" : "custom";
}

std::optional<Profile> parse_profile(std::string_view name) {
  if (name == "custom") return Profile::Custom;
  if (name == "reproduction") return Profile::Reproduction;
  return std::nullopt;
}

std::vector<SplitPlan> RunConfig::plans() const {
  std::vector<SplitPlan> out;
  if (kfold) out.push_back(*kfold);
  if (holdout) out.push_back(*holdout);
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(fmt::format("{}: {}", path.empty() ? "<root>" : path, message));
}

// Walks one JSON object, remembering which keys were read so that anything
// left over can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  std::string key_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    const auto it = node_.find(std::string(key));
    return it == node_.end() ? nullptr : &*it;
  }

  std::optional<Section> child(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, key_path(key));
  }

  void read(std::string_view key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(key_path(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  void read(std::string_view key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(key_path(key), "expected a number");
      out = v->get<double>();
    }
  }

  template <typename Int>
    requires std::is_integral_v<Int>
  void read(std::string_view key, Int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(key_path(key), "expected an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        if (v->is_number_unsigned()) {
          out = static_cast<Int>(v->get<std::uint64_t>());
          return;
        }
        if (v->get<std::int64_t>() < 0) fail(key_path(key), "must be >= 0");
      }
      out = static_cast<Int>(v->get<std::int64_t>());
    }
  }

  void read(std::string_view key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key_path(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void read(std::string_view key, fs::path& out) {
    std::string s = out.string();
    read(key, s);
    out = s;
  }

  // null clears the value.
  template <typename T>
  void read_optional(std::string_view key, std::optional<T>& out) {
    const json* v = find(key);
    if (!v) return;
    if (v->is_null()) {
      out.reset();
      return;
    }
    T value{};
    seen_.erase(std::string(key));
    read(key, value);
    out = value;
  }

  template <typename Parse>
  void read_enum(std::string_view key, Parse parse) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(key_path(key), "expected a string");
      parse(v->get<std::string>());
    }
  }

  template <typename T, typename Parse>
  void read_list(std::string_view key, std::vector<T>& out, Parse parse) {
    const json* v = find(key);
    if (!v) return;
    if (!v->is_array()) fail(key_path(key), "expected a list");
    std::vector<T> items;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& item = (*v)[i];
      const std::string where = fmt::format("{}[{}]", key_path(key), i);
      if (!item.is_string()) fail(where, "expected a string");
      const auto parsed = parse(item.get<std::string>());
      if (!parsed) fail(where, fmt::format("unknown value '{}'", item.get<std::string>()));
      if (std::find(items.begin(), items.end(), *parsed) != items.end()) {
        fail(where, fmt::format("duplicate value '{}'", item.get<std::string>()));
      }
      items.push_back(*parsed);
    }
    out = std::move(items);
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) fail(key_path(key), "unknown key");
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::optional<ModelKind> try_parse_model(const std::string& name) {
  try {
    return parse_model(name);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

void read_plans(Section& root, RunConfig& c) {
  auto plans = root.child("plans");
  if (!plans) return;
  if (auto k = plans->child("kfold")) {
    bool enabled = c.kfold.has_value();
    k->read("enabled", enabled);
    SplitPlan p = c.kfold.value_or(SplitPlan::kfold(10, 5));
    k->read("k", p.k);
    k->read("repeats", p.n_repeats);
    k->finish();
    c.kfold = enabled ? std::optional(p) : std::nullopt;
  }
  if (auto h = plans->child("holdout")) {
    bool enabled = c.holdout.has_value();
    h->read("enabled", enabled);
    SplitPlan p = c.holdout.value_or(SplitPlan::holdout(0.2, 50));
    h->read("test_fraction", p.test_fraction);
    h->read("repeats", p.n_repeats);
    h->finish();
    c.holdout = enabled ? std::optional(p) : std::nullopt;
  }
  plans->finish();
}

void read_features(Section& root, FeatureConfig& f) {
  auto s = root.child("features");
  if (!s) return;
  s->read("denoise", f.denoise);
  s->read("levels", f.levels);
  s->read_enum("extension", [&](const std::string& v) {
    const auto mode = parse_extension_mode(v);
    if (!mode) fail(s->key_path("extension"), fmt::format("unknown extension mode '{}'", v));
    f.mode = *mode;
  });
  s->read_enum("entropy", [&](const std::string& v) {
    if (v == "normalized") {
      f.entropy = EntropyForm::Normalized;
    } else if (v == "raw") {
      f.entropy = EntropyForm::Raw;
    } else {
      fail(s->key_path("entropy"), fmt::format("expected 'normalized' or 'raw', got '{}'", v));
    }
  });
  if (auto d = s->child("denoising")) {
    d->read("levels", f.denoising.levels);
    d->read_enum("extension", [&](const std::string& v) {
      const auto mode = parse_extension_mode(v);
      if (!mode) fail(d->key_path("extension"), fmt::format("unknown extension mode '{}'", v));
      f.denoising.mode = *mode;
    });
    d->read_enum("rule", [&](const std::string& v) {
      if (v == "soft") {
        f.denoising.rule = ThresholdRule::Soft;
      } else if (v == "hard") {
        f.denoising.rule = ThresholdRule::Hard;
      } else {
        fail(d->key_path("rule"), fmt::format("expected 'soft' or 'hard', got '{}'", v));
      }
    });
    d->finish();
  }
  if (auto m = s->child("mfcc")) {
    auto& c = f.mfcc;
    m->read("frame_len", c.frame_len);
    m->read("frame_step", c.frame_step);
    m->read("preemph_alpha", c.preemph_alpha);
    m->read("n_filters", c.n_filters);
    m->read("n_coeffs", c.n_coeffs);
    m->read("hamming_a", c.hamming_a);
    m->read("hamming_b", c.hamming_b);
    m->read("mel_delta", c.mel_delta);
    m->read("mel_nu", c.mel_nu);
    m->read_enum("log_base", [&](const std::string& v) {
      if (v == "e") {
        c.log_base = LogBase::Natural;
      } else if (v == "10") {
        c.log_base = LogBase::Base10;
      } else {
        fail(m->key_path("log_base"), fmt::format("expected 'e' or '10', got '{}'", v));
      }
    });
    m->read("energy_floor", c.energy_floor);
    m->finish();
  }
  s->finish();
}

void read_preprocess(Section& root, PreprocessConfig& p) {
  auto s = root.child("preprocess");
  if (!s) return;
  s->read("standardize", p.standardize);
  s->read("pca", p.pca);
  s->read("pca_on_wfe", p.pca_on_wfe);
  s->read("variance_target", p.variance_target);
  s->finish();
}

void read_hyperparams(Section& root, Hyperparams& h) {
  auto s = root.child("hyperparams");
  if (!s) return;
  if (auto knn = s->child("knn")) {
    knn->read("k", h.knn_k);
    knn->finish();
  }
  if (auto svm = s->child("svm")) {
    svm->read_enum("kernel", [&](const std::string& v) {
      try {
        h.svm.kernel = parse_kernel(v);
      } catch (const std::invalid_argument&) {
        fail(svm->key_path("kernel"), fmt::format("unknown kernel '{}'", v));
      }
    });
    svm->read("C", h.svm.c);
    svm->read_optional("gamma", h.svm.gamma);
    svm->read("degree", h.svm.degree);
    svm->read("coef0", h.svm.coef0);
    svm->read("tolerance", h.svm.tolerance);
    svm->read("max_iterations", h.svm.max_iterations);
    svm->finish();
  }
  if (auto rf = s->child("rf")) {
    rf->read("n_trees", h.rf.n_trees);
    rf->read_optional("max_features", h.rf.max_features);
    rf->read_optional("max_depth", h.rf.max_depth);
    rf->read("bootstrap", h.rf.bootstrap);
    rf->finish();
  }
  if (auto gb = s->child("gb")) {
    gb->read("n_stages", h.gb.n_stages);
    gb->read("learning_rate", h.gb.learning_rate);
    gb->read("max_depth", h.gb.max_depth);
    gb->read("subsample", h.gb.subsample);
    gb->finish();
  }
  s->read("ridge", h.ridge);
  if (auto nb = s->child("nb")) {
    nb->read("var_floor", h.nb_var_floor);
    nb->finish();
  }
  s->read("standardize_distance_models", h.standardize_distance_models);
  s->finish();
}

using ordered = nlohmann::ordered_json;

template <typename T>
ordered optional_json(const std::optional<T>& v) {
  return v ? ordered(*v) : ordered(nullptr);
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }

  RunConfig c;
  Section root(doc, "");
  root.read("corpus_root", c.corpus_root);
  root.read("output_dir", c.output_dir);
  root.read("seed", c.seed);
  root.read("jobs", c.jobs);
  root.read_enum("profile", [&](const std::string& v) {
    const auto p = parse_profile(v);
    if (!p) fail("profile", fmt::format("expected 'custom' or 'reproduction', got '{}'", v));
    c.profile = *p;
  });
  root.read_list("schemes", c.schemes, [](const std::string& v) { return parse_scheme(v); });
  root.read_list("extractors", c.extractors,
                 [](const std::string& v) { return parse_extractor(v); });
  root.read_list("models", c.models, try_parse_model);
  read_plans(root, c);
  if (auto stats = root.child("stats")) {
    stats->read("plan", c.stats_plan);
    stats->read("alpha", c.alpha);
    stats->finish();
  }
  root.read_enum("parse_mode", [&](const std::string& v) {
    if (v == "strict") {
      c.parse_mode = ParseMode::Strict;
    } else if (v == "lenient") {
      c.parse_mode = ParseMode::Lenient;
    } else {
      fail("parse_mode", fmt::format("expected 'strict' or 'lenient', got '{}'", v));
    }
  });
  read_features(root, c.features);
  read_preprocess(root, c.preprocess);
  read_hyperparams(root, c.hyperparams);
  root.finish();
  return c;
}

void pin_reproduction_profile(RunConfig& config) {
  RunConfig pinned;
  pinned.corpus_root = config.corpus_root;
  pinned.output_dir = config.output_dir;
  pinned.seed = config.seed;
  pinned.jobs = config.jobs;
  pinned.profile = Profile::Reproduction;
  config = std::move(pinned);
}

void validate(const RunConfig& c, bool check_paths) {
  if (c.corpus_root.empty()) {
    fail("corpus_root", fmt::format("required (or set {})", kCorpusRootEnv));
  }
  if (check_paths) {
    std::error_code ec;
    if (!fs::is_directory(c.corpus_root, ec)) {
      fail("corpus_root", fmt::format("'{}' is not a directory", c.corpus_root.string()));
    }
  }
  if (c.output_dir.empty()) fail("output_dir", "must not be empty");
  if (c.jobs < 1) fail("jobs", "must be >= 1");
  if (c.schemes.empty()) fail("schemes", "must not be empty");
  if (c.extractors.empty()) fail("extractors", "must not be empty");
  if (c.models.empty()) fail("models", "must not be empty");
  if (!c.kfold && !c.holdout) fail("plans", "at least one plan must be enabled");
  if (c.kfold) {
    if (c.kfold->k < 2) fail("plans.kfold.k", "must be >= 2");
    if (c.kfold->n_repeats < 1) fail("plans.kfold.repeats", "must be >= 1");
  }
  if (c.holdout) {
    if (!(c.holdout->test_fraction > 0.0 && c.holdout->test_fraction < 1.0)) {
      fail("plans.holdout.test_fraction", "must lie in (0, 1)");
    }
    if (c.holdout->n_repeats < 1) fail("plans.holdout.repeats", "must be >= 1");
  }
  if (c.stats_plan != "kfold" && c.stats_plan != "holdout") {
    fail("stats.plan", fmt::format("expected 'kfold' or 'holdout', got '{}'", c.stats_plan));
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("stats.alpha", "must lie in (0, 1)");
  if (c.features.levels < 1) fail("features.levels", "must be >= 1");
  if (c.features.denoising.levels < 1) fail("features.denoising.levels", "must be >= 1");
  try {
    c.features.mfcc.validate();
  } catch (const std::invalid_argument& e) {
    fail("features.mfcc", e.what());
  }
  if (!(c.preprocess.variance_target > 0.0 && c.preprocess.variance_target <= 1.0)) {
    fail("preprocess.variance_target", "must lie in (0, 1]");
  }
  c.hyperparams.validate();
}

void apply_overrides(RunConfig& config, const ConfigOverrides& o) {
  if (o.corpus_root) config.corpus_root = *o.corpus_root;
  if (o.output_dir) config.output_dir = *o.output_dir;
  if (o.seed) config.seed = *o.seed;
  if (o.jobs) config.jobs = *o.jobs;
  if (o.profile) config.profile = *o.profile;
  if (config.profile == Profile::Reproduction) pin_reproduction_profile(config);
}

RunConfig load_config(const fs::path& path, const ConfigOverrides& overrides, bool check_paths) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig config = parse_config(text.str());
  if (config.corpus_root.is_relative() && !config.corpus_root.empty()) {
    config.corpus_root = path.parent_path() / config.corpus_root;
  }
  if (const char* env = std::getenv(kCorpusRootEnv); env && *env) config.corpus_root = env;
  apply_overrides(config, overrides);
  validate(config, check_paths);
  return config;
}

std::string emit_config(const RunConfig& c) {
  ordered j;
  j["corpus_root"] = c.corpus_root.string();
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["profile"] = std::string(to_string(c.profile));

  ordered schemes = ordered::array();
  for (auto s : c.schemes) schemes.push_back(std::string(to_string(s)));
  j["schemes"] = schemes;
  ordered extractors = ordered::array();
  for (auto e : c.extractors) extractors.push_back(std::string(to_string(e)));
  j["extractors"] = extractors;
  ordered models = ordered::array();
  for (auto m : c.models) models.push_back(to_string(m));
  j["models"] = models;

  const auto kf = c.kfold.value_or(SplitPlan::kfold(10, 5));
  const auto ho = c.holdout.value_or(SplitPlan::holdout(0.2, 50));
  j["plans"] = {
      {"kfold", {{"enabled", c.kfold.has_value()}, {"k", kf.k}, {"repeats", kf.n_repeats}}},
      {"holdout",
       {{"enabled", c.holdout.has_value()},
        {"test_fraction", ho.test_fraction},
        {"repeats", ho.n_repeats}}}};
  j["stats"] = {{"plan", c.stats_plan}, {"alpha", c.alpha}};
  j["parse_mode"] = c.parse_mode == ParseMode::Strict ? "strict" : "lenient";

  const auto& f = c.features;
  const auto& m = f.mfcc;
  j["features"] = {
      {"denoise", f.denoise},
      {"levels", f.levels},
      {"extension", std::string(to_string(f.mode))},
      {"entropy", f.entropy == EntropyForm::Normalized ? "normalized" : "raw"},
      {"denoising",
       {{"levels", f.denoising.levels},
        {"extension", std::string(to_string(f.denoising.mode))},
        {"rule", f.denoising.rule == ThresholdRule::Soft ? "soft" : "hard"}}},
      {"mfcc",
       {{"frame_len", m.frame_len},
        {"frame_step", m.frame_step},
        {"preemph_alpha", m.preemph_alpha},
        {"n_filters", m.n_filters},
        {"n_coeffs", m.n_coeffs},
        {"hamming_a", m.hamming_a},
        {"hamming_b", m.hamming_b},
        {"mel_delta", m.mel_delta},
        {"mel_nu", m.mel_nu},
        {"log_base", m.log_base == LogBase::Natural ? "e" : "10"},
        {"energy_floor", m.energy_floor}}}};

  const auto& p = c.preprocess;
  j["preprocess"] = {{"standardize", p.standardize},
                     {"pca", p.pca},
                     {"pca_on_wfe", p.pca_on_wfe},
                     {"variance_target", p.variance_target}};

  const auto& h = c.hyperparams;
  j["hyperparams"] = {
      {"knn", {{"k", h.knn_k}}},
      {"svm",
       {{"kernel", to_string(h.svm.kernel)},
        {"C", h.svm.c},
        {"gamma", optional_json(h.svm.gamma)},
        {"degree", h.svm.degree},
        {"coef0", h.svm.coef0},
        {"tolerance", h.svm.tolerance},
        {"max_iterations", h.svm.max_iterations}}},
      {"rf",
       {{"n_trees", h.rf.n_trees},
        {"max_features", optional_json(h.rf.max_features)},
        {"max_depth", optional_json(h.rf.max_depth)},
        {"bootstrap", h.rf.bootstrap}}},
      {"gb",
       {{"n_stages", h.gb.n_stages},
        {"learning_rate", h.gb.learning_rate},
        {"max_depth", h.gb.max_depth},
        {"subsample", h.gb.subsample}}},
      {"ridge", h.ridge},
      {"nb", {{"var_floor", h.nb_var_floor}}},
      {"standardize_distance_models", h.standardize_distance_models}};
  return j.dump(2) + "\n";
}

}  // namespace sbench
