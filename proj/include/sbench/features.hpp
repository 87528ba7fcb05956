// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sbench/corpus.hpp"
#include "sbench/mfcc.hpp"
#include "sbench/wavelet.hpp"

namespace sbench {

// Feature extractors compared by the benchmark. Wfe is the no-extraction
// baseline (raw samples as the instance vector).
enum class Extractor { Wfe, Db2, Db4, Coif1, Mfcc };

inline constexpr Extractor kAllExtractors[] = {Extractor::Wfe, Extractor::Db2, Extractor::Db4,
                                               Extractor::Coif1, Extractor::Mfcc};

std::string_view to_string(Extractor extractor);
std::optional<Extractor> parse_extractor(std::string_view name);
std::optional<WaveletFamily> wavelet_of(Extractor extractor);

enum class EntropyForm {
  Normalized,  // p_i = x_i^2 / sum x^2, -sum p ln p
  Raw,         // -sum x^2 ln x^2
};

struct BandStatistics {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;
  double variance = 0.0;  // population
  double energy = 0.0;    // sum x^2 / N
  double psd_max = 0.0;   // over positive-frequency bins of |FFT|^2 / N
  double psd_min = 0.0;
  double shannon_entropy = 0.0;
  double iqr = 0.0;
  double kurtosis = 0.0;  // 0 when the band is constant
  double total_variation = 0.0;
};

BandStatistics band_statistics(std::span<const double> coeffs,
                               EntropyForm entropy = EntropyForm::Normalized);

double shannon_entropy(std::span<const double> coeffs,
                       EntropyForm form = EntropyForm::Normalized);

// Entropy of the normalized positive-frequency power spectrum of the band.
double spectral_entropy(std::span<const double> coeffs);

struct FeatureConfig {
  bool denoise = true;
  DenoiseOptions denoising;
  int levels = kDefaultLevels;
  ExtensionMode mode = ExtensionMode::Periodized;
  EntropyForm entropy = EntropyForm::Normalized;
  MfccConfig mfcc;

  bool operator==(const FeatureConfig&) const = default;
};

struct FeatureVector {
  Extractor extractor = Extractor::Wfe;
  std::vector<std::string> names;
  std::vector<double> values;
};

// Column names produced by `extractor` for a signal of `signal_length` samples.
std::vector<std::string> feature_names(Extractor extractor, const FeatureConfig& config,
                                       std::size_t signal_length);

FeatureVector assemble_features(const EegSignal& signal, Extractor extractor,
                                const FeatureConfig& config = {});

struct FeatureMatrix {
  Extractor extractor = Extractor::Wfe;
  Eigen::MatrixXd values;  // rows = instances
  std::vector<std::string> names;
  std::vector<int> labels;
  std::vector<std::string> source_ids;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

// Extracts every instance of `dataset`; `jobs` worker threads share the rows.
FeatureMatrix extract_matrix(const LabeledDataset& dataset, Extractor extractor,
                             const FeatureConfig& config = {}, int jobs = 1);

// Header row of feature names then "label"; one row per instance.
void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix);

}  // namespace sbench
