// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sbench {

// The five Bonn recording sets. Z/O are healthy surface recordings, N/F are
// seizure-free intracranial recordings and S is ictal activity.
enum class SetTag { Z, O, N, F, S };

inline constexpr std::array<SetTag, 5> kAllSetTags = {SetTag::Z, SetTag::O, SetTag::N,
                                                       SetTag::F, SetTag::S};
inline constexpr std::array<SetTag, 4> kNegativeSetTags = {SetTag::Z, SetTag::O, SetTag::N,
                                                            SetTag::F};

inline constexpr double kBonnSampleRate = 173.61;
inline constexpr std::size_t kBonnSamples = 4097;
inline constexpr std::size_t kBonnSignalsPerSet = 100;

char to_char(SetTag tag);
std::optional<SetTag> parse_set_tag(char c);

struct EegSignal {
  std::vector<double> samples;
  double sample_rate = kBonnSampleRate;
  SetTag set_tag = SetTag::Z;
  std::string source_id;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  bool operator==(const EegSignal&) const = default;
};

enum class ParseMode { Strict, Lenient };

struct LoadOptions {
  ParseMode mode = ParseMode::Strict;
  std::size_t expected_samples = kBonnSamples;
  std::size_t expected_per_set = kBonnSignalsPerSet;
  // Receives lenient-mode warnings; stderr when unset.
  std::function<void(const std::string&)> warn;
};

// Reads one Bonn text file (one integer sample per line). The set tag comes
// from the parent directory name when it is a single Bonn letter, otherwise
// from the first character of the file name.
EegSignal load_signal(const std::filesystem::path& path, const LoadOptions& options = {});

// Parses the text body of a Bonn file. `origin` is used in error messages.
std::vector<double> parse_samples(std::string_view text, std::string_view origin);

using Corpus = std::map<SetTag, std::vector<EegSignal>>;

// Loads every set under `root`, either as Z/O/N/F/S subdirectories or as a
// flat directory of tag-prefixed files. Signals are ordered by file name.
Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& options = {});

enum class Scheme { Imbalanced, Balanced };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

struct WindowOptions {
  std::size_t length = 0;
  std::size_t stride = 0;
};

struct LabeledDataset {
  std::vector<EegSignal> instances;
  std::vector<int> labels;  // 1 = seizure (S), 0 = F/N/O/Z
  Scheme scheme = Scheme::Imbalanced;
  std::uint64_t seed = 0;

  std::size_t size() const { return instances.size(); }
  std::size_t positives() const;
};

inline int label_for(SetTag tag) { return tag == SetTag::S ? 1 : 0; }

// Imbalanced: every signal. Balanced: every S signal plus an equal number of
// negatives drawn without replacement, a quarter from each of F, N, O and Z.
LabeledDataset build_dataset(const Corpus& corpus, Scheme scheme, std::uint64_t seed,
                             const std::optional<WindowOptions>& windows = std::nullopt);

// Splits a signal into fixed-length windows; a trailing partial window is dropped.
std::vector<EegSignal> window_signal(const EegSignal& signal, const WindowOptions& options);

// CSV: source_id,set_tag,label,scheme,seed
void write_manifest(std::ostream& out, const LabeledDataset& dataset);

}  // namespace sbench
