// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "sbench/fft.hpp"

namespace sbench {

void MfccConfig::validate() const {
  if (frame_len == 0 || frame_step == 0 || frame_step > frame_len) {
    throw std::invalid_argument(
        fmt::format("mfcc frame geometry needs 0 < frame_step <= frame_len (got {} / {})",
                    frame_step, frame_len));
  }
  if (frame_len < 2) throw std::invalid_argument("mfcc frame_len must be at least 2");
  if (n_filters == 0) throw std::invalid_argument("mfcc n_filters must be at least 1");
  if (n_coeffs == 0 || n_coeffs > n_filters) {
    throw std::invalid_argument(fmt::format(
        "mfcc n_coeffs must be in [1, n_filters] (got {} with {} filters)", n_coeffs, n_filters));
  }
  if (!(preemph_alpha >= 0.0 && preemph_alpha < 1.0)) {
    throw std::invalid_argument("mfcc preemph_alpha must be in [0, 1)");
  }
  if (!(mel_delta > 0.0) || !(mel_nu > 0.0)) {
    throw std::invalid_argument("mfcc mel parameters must be positive");
  }
  if (!(energy_floor > 0.0)) throw std::invalid_argument("mfcc energy_floor must be positive");
}

std::vector<double> pre_emphasize(std::span<const double> signal, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("pre-emphasis alpha must be in [0, 1)");
  }
  std::vector<double> y(signal.size());
  if (signal.empty()) return y;
  y[0] = signal[0];
  for (std::size_t n = 1; n < signal.size(); ++n) y[n] = signal[n] - alpha * signal[n - 1];
  return y;
}

std::size_t frame_count(std::size_t signal_len, std::size_t frame_len, std::size_t frame_step) {
  if (frame_step == 0) throw std::invalid_argument("frame_step must be positive");
  if (signal_len < frame_len) return 0;
  return (signal_len - frame_len) / frame_step + 1;
}

FrameMatrix frame_signal(std::span<const double> signal, std::size_t frame_len,
                         std::size_t frame_step) {
  const std::size_t frames = frame_count(signal.size(), frame_len, frame_step);
  if (frames == 0) {
    throw std::invalid_argument(fmt::format(
        "signal of {} samples is too short for one {}-sample frame", signal.size(), frame_len));
  }
  FrameMatrix out(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(frame_len));
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t k = 0; k < frame_len; ++k) {
      out(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) =
          signal[f * frame_step + k];
    }
  }
  return out;
}

std::vector<double> hamming_window(std::size_t n_points, double a, double b) {
  if (n_points < 2) throw std::invalid_argument("Hamming window needs at least 2 points");
  std::vector<double> w(n_points);
  const double denom = static_cast<double>(n_points - 1);
  for (std::size_t k = 0; k < n_points; ++k) {
    w[k] = a - b * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / denom);
  }
  return w;
}

FrameMatrix power_spectrum(const FrameMatrix& frames, std::size_t nfft) {
  const auto frame_len = static_cast<std::size_t>(frames.cols());
  if (nfft == 0) nfft = next_pow2(frame_len);
  if (nfft < frame_len) throw std::invalid_argument("nfft shorter than the frame");
  const auto bins = static_cast<Eigen::Index>(nfft / 2 + 1);
  FrameMatrix out(frames.rows(), bins);
  std::vector<double> row(frame_len);
  for (Eigen::Index f = 0; f < frames.rows(); ++f) {
    for (std::size_t k = 0; k < frame_len; ++k) row[k] = frames(f, static_cast<Eigen::Index>(k));
    const auto power = power_bins(row, nfft);
    for (Eigen::Index k = 0; k < bins; ++k) out(f, k) = power[static_cast<std::size_t>(k)];
  }
  return out;
}

double hz_to_mel(double hz, const MfccConfig& config) {
  if (hz < 0.0) throw std::invalid_argument(fmt::format("negative frequency {} Hz", hz));
  const double ratio = 1.0 + hz / config.mel_nu;
  return config.mel_delta * (config.log_base == LogBase::Natural ? std::log(ratio)
                                                                  : std::log10(ratio));
}

double mel_to_hz(double mel, const MfccConfig& config) {
  const double scaled = mel / config.mel_delta;
  const double ratio =
      config.log_base == LogBase::Natural ? std::exp(scaled) : std::pow(10.0, scaled);
  return config.mel_nu * (ratio - 1.0);
}

MelFilterbank mel_filterbank(std::size_t n_filters, std::size_t nfft, double sample_rate,
                             const MfccConfig& config) {
  if (n_filters == 0) throw std::invalid_argument("mel filterbank needs at least one filter");
  if (nfft < 2 || !(sample_rate > 0.0)) {
    throw std::invalid_argument("mel filterbank needs nfft >= 2 and a positive sample rate");
  }
  const std::size_t bins = nfft / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  const double mel_top = hz_to_mel(nyquist, config);
  const double bin_hz = sample_rate / static_cast<double>(nfft);

  MelFilterbank bank;
  bank.edge_hz.resize(n_filters + 2);
  bank.edge_bins.resize(n_filters + 2);
  for (std::size_t i = 0; i < n_filters + 2; ++i) {
    const double mel = mel_top * static_cast<double>(i) / static_cast<double>(n_filters + 1);
    bank.edge_hz[i] = i == n_filters + 1 ? nyquist : mel_to_hz(mel, config);
    const double snapped = std::round(bank.edge_hz[i] / bin_hz);
    bank.edge_bins[i] = std::min(static_cast<std::size_t>(snapped), bins - 1);
    if (i > 0 && bank.edge_bins[i] <= bank.edge_bins[i - 1]) {
      throw std::invalid_argument(fmt::format(
          "{} mel filters are too many for nfft {} at {} Hz: points {} and {} share bin {}",
          n_filters, nfft, sample_rate, i - 1, i, bank.edge_bins[i]));
    }
  }
  bank.center_hz.assign(bank.edge_hz.begin() + 1, bank.edge_hz.end() - 1);

  bank.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_filters),
                                       static_cast<Eigen::Index>(bins));
  for (std::size_t m = 0; m < n_filters; ++m) {
    const std::size_t left = bank.edge_bins[m];
    const std::size_t center = bank.edge_bins[m + 1];
    const std::size_t right = bank.edge_bins[m + 2];
    const auto row = static_cast<Eigen::Index>(m);
    for (std::size_t k = left; k <= center; ++k) {
      bank.weights(row, static_cast<Eigen::Index>(k)) =
          static_cast<double>(k - left) / static_cast<double>(center - left);
    }
    for (std::size_t k = center; k <= right; ++k) {
      bank.weights(row, static_cast<Eigen::Index>(k)) =
          static_cast<double>(right - k) / static_cast<double>(right - center);
    }
  }
  return bank;
}

FrameMatrix log_filterbank_energies(const FrameMatrix& power, const MelFilterbank& bank,
                                    double floor) {
  if (power.cols() != bank.weights.cols()) {
    throw std::invalid_argument("power spectrum width does not match the filterbank");
  }
  FrameMatrix energies = power * bank.weights.transpose();
  return energies.unaryExpr([floor](double e) { return std::log(std::max(e, floor)); });
}

FrameMatrix cosine_transform(const FrameMatrix& log_energies, std::size_t n_coeffs) {
  const auto m_count = static_cast<std::size_t>(log_energies.cols());
  if (n_coeffs > m_count) throw std::invalid_argument("more cepstral coefficients than filters");
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(m_count), static_cast<Eigen::Index>(n_coeffs));
  for (std::size_t l = 0; l < m_count; ++l) {
    for (std::size_t n = 0; n < n_coeffs; ++n) {
      basis(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(n)) =
          std::cos(std::numbers::pi * static_cast<double>(n) * (static_cast<double>(l) + 0.5) /
                   static_cast<double>(m_count));
    }
  }
  return log_energies * basis;
}

FrameMatrix cepstra(std::span<const double> signal, double sample_rate,
                    const MfccConfig& config) {
  config.validate();
  const auto emphasized = pre_emphasize(signal, config.preemph_alpha);
  FrameMatrix frames = frame_signal(emphasized, config.frame_len, config.frame_step);
  const auto window = hamming_window(config.frame_len, config.hamming_a, config.hamming_b);
  for (Eigen::Index k = 0; k < frames.cols(); ++k) {
    frames.col(k) *= window[static_cast<std::size_t>(k)];
  }
  const std::size_t nfft = next_pow2(config.frame_len);
  const FrameMatrix power = power_spectrum(frames, nfft);
  const MelFilterbank bank = mel_filterbank(config.n_filters, nfft, sample_rate, config);
  return cosine_transform(log_filterbank_energies(power, bank, config.energy_floor),
                          config.n_coeffs);
}

std::vector<double> mfcc_features(std::span<const double> signal, double sample_rate,
                                  const MfccConfig& config) {
  const FrameMatrix c = cepstra(signal, sample_rate, config);
  const auto p = static_cast<std::size_t>(c.cols());
  const double frames = static_cast<double>(c.rows());
  std::vector<double> out(2 * p);
  for (std::size_t n = 0; n < p; ++n) {
    const auto col = c.col(static_cast<Eigen::Index>(n));
    const double mu = col.mean();
    const double var = (col.array() - mu).square().sum() / frames;
    out[n] = mu;
    out[p + n] = std::sqrt(var);
  }
  return out;
}

std::vector<std::string> mfcc_feature_names(const MfccConfig& config) {
  std::vector<std::string> names;
  for (std::size_t n = 0; n < config.n_coeffs; ++n) names.push_back(fmt::format("mfcc{}_mean", n));
  for (std::size_t n = 0; n < config.n_coeffs; ++n) names.push_back(fmt::format("mfcc{}_std", n));
  return names;
}

}  // namespace sbench
