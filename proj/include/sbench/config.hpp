// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbench/classifiers.hpp"
#include "sbench/corpus.hpp"
#include "sbench/evaluation.hpp"
#include "sbench/features.hpp"

namespace sbench {

inline constexpr const char* kCorpusRootEnv = "SBENCH_CORPUS_ROOT";

enum class Profile { Custom, Reproduction };

std::string_view to_string(Profile profile);
std::optional<Profile> parse_profile(std::string_view name);

struct RunConfig {
  std::filesystem::path corpus_root;
  std::filesystem::path output_dir = "sbench-results";
  std::uint64_t seed = 20240101;
  int jobs = 1;
  Profile profile = Profile::Custom;

  std::vector<Scheme> schemes{Scheme::Imbalanced, Scheme::Balanced};
  std::vector<Extractor> extractors{std::begin(kAllExtractors), std::end(kAllExtractors)};
  std::vector<ModelKind> models{kAllModels.begin(), kAllModels.end()};

  // Either plan may be switched off, not both.
  std::optional<SplitPlan> kfold = SplitPlan::kfold(10, 5);
  std::optional<SplitPlan> holdout = SplitPlan::holdout(0.2, 50);
  // Plan whose replications feed the ANOVA and Tukey reports.
  std::string stats_plan = "holdout";
  double alpha = 0.05;

  ParseMode parse_mode = ParseMode::Strict;
  FeatureConfig features;
  PreprocessConfig preprocess;
  Hyperparams hyperparams;

  std::vector<SplitPlan> plans() const;
  bool operator==(const RunConfig&) const = default;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<Profile> profile;
  std::optional<std::filesystem::path> corpus_root;
  std::optional<std::filesystem::path> output_dir;
};

// Parses a JSON document into a fully defaulted config. Unknown keys and
// type or range violations throw ConfigError naming the key path, e.g.
// "hyperparams.svm.kernel: unknown kernel 'rbff'".
RunConfig parse_config(std::string_view json_text);

// Reads `path`, applies the environment corpus override then `overrides`,
// pins the reproduction profile when selected and validates. When
// `check_paths` is set the corpus root must be an existing directory.
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {},
                      bool check_paths = true);

// Applies overrides in place and revalidates.
void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

// Resets every experiment-design field to the reproduction defaults while
// keeping paths, seed and worker count.
void pin_reproduction_profile(RunConfig& config);

void validate(const RunConfig& config, bool check_paths);

// Normalized JSON with every field spelled out; parse_config of the result
// gives back an equal config.
std::string emit_config(const RunConfig& config);

}  // namespace sbench
