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

#include "sbench/corpus.hpp"

namespace sbench {

enum class WaveletFamily { Haar, Db2, Db4, Coif1 };

std::string_view to_string(WaveletFamily family);
std::optional<WaveletFamily> parse_wavelet_family(std::string_view name);

// Orthonormal two-channel filter bank. lo_dec holds the scaling coefficients
// in natural order (sum sqrt(2), unit norm); hi_dec[i] = (-1)^i lo_dec[L-1-i].
// The rec filters are the time reverses of the dec filters.
struct WaveletFilter {
  WaveletFamily family = WaveletFamily::Haar;
  std::vector<double> lo_dec;
  std::vector<double> hi_dec;
  std::vector<double> lo_rec;
  std::vector<double> hi_rec;
  int vanishing_moments = 1;

  std::size_t length() const { return lo_dec.size(); }
};

WaveletFilter filter_for(WaveletFamily family);
// Throws std::invalid_argument for names outside haar/db2/db4/coif1.
WaveletFilter filter_for(std::string_view family_name);

enum class ExtensionMode {
  // Circular convolution. Odd-length inputs are first embedded isometrically
  // into n + 1 samples (constants stay constant), so every level is an
  // orthogonal map; approximation length is ceil(n/2).
  Periodized,
  // Half-sample symmetric extension, floor((n+L-1)/2) coefficients per band.
  Symmetric,
};

std::string_view to_string(ExtensionMode mode);
std::optional<ExtensionMode> parse_extension_mode(std::string_view name);

struct LevelCoeffs {
  std::vector<double> approx;
  std::vector<double> detail;
};

// One analysis step: filter with lo_dec/hi_dec and keep every second output,
// approx[m] = sum_k lo_dec[k] * x[2m + k + offset].
LevelCoeffs analyze_level(std::span<const double> signal, const WaveletFilter& filter,
                          ExtensionMode mode);

// Inverse of analyze_level for an input of `output_length` samples.
std::vector<double> synthesize_level(std::span<const double> approx,
                                     std::span<const double> detail,
                                     const WaveletFilter& filter, ExtensionMode mode,
                                     std::size_t output_length);

struct FrequencyRange {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

struct SubBands {
  // [A_L, D_L, D_{L-1}, ..., D_1]
  std::vector<std::vector<double>> bands;
  // Input length at each analysis level, finest first: [n, n_1, ..., n_{L-1}].
  std::vector<std::size_t> level_lengths;
  ExtensionMode mode = ExtensionMode::Periodized;
  WaveletFamily family = WaveletFamily::Haar;
  double sample_rate = kBonnSampleRate;

  int levels() const { return static_cast<int>(level_lengths.size()); }
  const std::vector<double>& approximation() const { return bands.front(); }
  const std::vector<double>& finest_detail() const { return bands.back(); }

  std::vector<std::string> band_names() const;
  // True ranges for this sample rate (A4 at 173.61 Hz: 0-5.4 Hz).
  std::vector<FrequencyRange> frequency_ranges() const;
  // The customary labels that assume a 128 Hz rate ("0-4 Hz" ... "32-64 Hz").
  std::vector<std::string> nominal_labels() const;
};

inline constexpr int kDefaultLevels = 4;

SubBands wavedec(std::span<const double> signal, const WaveletFilter& filter,
                 int levels = kDefaultLevels, ExtensionMode mode = ExtensionMode::Periodized,
                 double sample_rate = kBonnSampleRate);

std::vector<double> waverec(const SubBands& subbands, const WaveletFilter& filter);

// lambda = sigma * sqrt(2 ln n), sigma = median(|d|) / 0.6745.
double universal_threshold(std::span<const double> finest_detail, std::size_t n);

enum class ThresholdRule { Soft, Hard };

inline double soft_threshold(double c, double lambda) {
  if (c > lambda) return c - lambda;
  if (c < -lambda) return c + lambda;
  return 0.0;
}

inline double hard_threshold(double c, double lambda) {
  return (c > lambda || c < -lambda) ? c : 0.0;
}

struct DenoiseOptions {
  int levels = kDefaultLevels;
  ExtensionMode mode = ExtensionMode::Periodized;
  ThresholdRule rule = ThresholdRule::Soft;

  bool operator==(const DenoiseOptions&) const = default;
};

// Decompose, shrink every detail band with one global universal threshold
// estimated from D1, reconstruct. The approximation band is left untouched.
std::vector<double> denoise(std::span<const double> signal, const WaveletFilter& filter,
                            const DenoiseOptions& options = {});
EegSignal denoise(const EegSignal& signal, const WaveletFilter& filter,
                  const DenoiseOptions& options = {});

// CSV dump: band,index,coefficient
void write_subbands_csv(std::ostream& out, const SubBands& subbands);

}  // namespace sbench
