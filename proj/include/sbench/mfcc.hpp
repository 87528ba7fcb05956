// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sbench {

enum class LogBase { Natural, Base10 };

struct MfccConfig {
  std::size_t frame_len = 256;
  std::size_t frame_step = 128;
  double preemph_alpha = 0.97;
  std::size_t n_filters = 26;  // M
  std::size_t n_coeffs = 14;   // p
  double hamming_a = 0.54;
  double hamming_b = 0.46;
  double mel_delta = 2595.0;
  double mel_nu = 700.0;
  LogBase log_base = LogBase::Natural;  // base of the Mel warping log
  double energy_floor = 1e-12;

  // Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
  bool operator==(const MfccConfig&) const = default;
};

// Rows are frames; columns are samples, spectral bins or coefficients.
using FrameMatrix = Eigen::MatrixXd;

std::vector<double> pre_emphasize(std::span<const double> signal, double alpha);

// floor((len - frame_len) / step) + 1, or 0 when the signal is too short.
std::size_t frame_count(std::size_t signal_len, std::size_t frame_len, std::size_t frame_step);

FrameMatrix frame_signal(std::span<const double> signal, std::size_t frame_len,
                         std::size_t frame_step);

// H[k] = a - b cos(2 pi k / (N - 1)).
std::vector<double> hamming_window(std::size_t n_points, double a = 0.54, double b = 0.46);

// |FFT|^2 of every row on bins 0..nfft/2; nfft defaults to the next power of
// two at or above the row length.
FrameMatrix power_spectrum(const FrameMatrix& frames, std::size_t nfft = 0);

double hz_to_mel(double hz, const MfccConfig& config = {});
double mel_to_hz(double mel, const MfccConfig& config = {});

struct MelFilterbank {
  Eigen::MatrixXd weights;               // n_filters x (nfft/2 + 1)
  std::vector<double> edge_hz;           // n_filters + 2 Mel-equispaced points
  std::vector<double> center_hz;         // edge_hz[1..n_filters]
  std::vector<std::size_t> edge_bins;    // edge_hz snapped to the nearest FFT bin
};

// Triangular filters between Mel-equispaced points from 0 Hz to Nyquist.
// Each filter rises from its left edge bin to 1 at its center bin and falls
// back to 0 at its right edge bin. Throws when two edge points snap to the
// same bin.
MelFilterbank mel_filterbank(std::size_t n_filters, std::size_t nfft, double sample_rate,
                             const MfccConfig& config = {});

// ln(max(sum_k P[k] H_m[k], floor)) for every frame and filter.
FrameMatrix log_filterbank_energies(const FrameMatrix& power, const MelFilterbank& bank,
                                    double floor);

// Unnormalized type-II cosine transform, c_n = sum_l e_l cos(pi n (l + 1/2) / M),
// keeping n = 0..n_coeffs-1.
FrameMatrix cosine_transform(const FrameMatrix& log_energies, std::size_t n_coeffs);

// Per-frame cepstra (frames x n_coeffs).
FrameMatrix cepstra(std::span<const double> signal, double sample_rate, const MfccConfig& config);

// Mean and population standard deviation of every coefficient across frames:
// [mean_0..mean_{p-1}, std_0..std_{p-1}].
std::vector<double> mfcc_features(std::span<const double> signal, double sample_rate,
                                  const MfccConfig& config = {});

std::vector<std::string> mfcc_feature_names(const MfccConfig& config = {});

}  // namespace sbench
