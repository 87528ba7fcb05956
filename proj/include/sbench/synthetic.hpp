// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "sbench/corpus.hpp"

namespace sbench {

// Bonn-shaped synthetic recordings for tests and smoke runs. Z/O carry an
// alpha rhythm, N/F a theta rhythm with sparse spikes and S a high-amplitude
// 3 Hz spike-and-wave discharge. Samples are rounded to integers like the
// real files.
struct SynthOptions {
  std::size_t signals_per_set = kBonnSignalsPerSet;
  std::size_t samples = kBonnSamples;
  std::uint64_t seed = 1;
  double noise = 25.0;
};

Corpus synthesize_corpus(const SynthOptions& options = {});

// Writes root/<tag>/<tag><NNN>.txt, one sample per line.
void write_corpus(const std::filesystem::path& root, const Corpus& corpus);

}  // namespace sbench
