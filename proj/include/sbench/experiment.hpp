// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sbench/config.hpp"
#include "sbench/corpus.hpp"
#include "sbench/evaluation.hpp"

namespace sbench {

// Seeds derived from the master seed. Splits depend on (scheme, plan) only,
// so every extractor and model of a scheme sees the same partitions.
std::uint64_t dataset_seed(std::uint64_t master, Scheme scheme);
SplitPlan seeded_plan(const SplitPlan& plan, std::uint64_t master, Scheme scheme);

struct CellProgress {
  std::size_t done = 0;
  std::size_t total = 0;
  const CellResult* cell = nullptr;
};

struct ExperimentOptions {
  // Called after each finished cell, from whichever worker finished it.
  std::function<void(const CellProgress&)> progress;
};

struct ExperimentResult {
  // Finished cells in configuration order: scheme, extractor, plan, model.
  std::vector<CellResult> cells;
  std::size_t planned = 0;
  // Empty on success; otherwise the first failure. Remaining work is skipped.
  std::optional<std::string> failure;
  double elapsed_seconds = 0.0;

  bool complete() const { return !failure && cells.size() == planned; }
  std::vector<LongRow> rows_for(const std::string& plan) const;
};

// Runs every (scheme, extractor, plan, model) cell on `config.jobs` workers.
// Feature extraction and split preprocessing are done once per (scheme,
// extractor) and (scheme, extractor, plan) and shared by the models. Cell
// failures are reported through ExperimentResult::failure; DataError from the
// corpus or feature extraction propagates.
ExperimentResult run_experiment(const RunConfig& config, const Corpus& corpus,
                                const ExperimentOptions& options = {});

// Writes the report bundle into `config.output_dir` through a temporary
// sibling directory that is renamed into place. An incomplete result is
// written to "<output_dir>.partial" instead, with a manifest listing the
// finished cells. Returns the directory written.
std::filesystem::path write_bundle(const RunConfig& config, const ExperimentResult& result);

// Deterministic FNV-1a hash of the normalized config, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace sbench
