// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/features.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "sbench/descriptive.hpp"
#include "sbench/error.hpp"
#include "sbench/fft.hpp"

namespace sbench {

std::string_view to_string(Extractor extractor) {
  switch (extractor) {
    case Extractor::Wfe: return "wfe";
    case Extractor::Db2: return "db2";
    case Extractor::Db4: return "db4";
    case Extractor::Coif1: return "coif1";
    case Extractor::Mfcc: return "mfcc";
  }
  return "?";
}

std::optional<Extractor> parse_extractor(std::string_view name) {
  for (Extractor e : kAllExtractors) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::optional<WaveletFamily> wavelet_of(Extractor extractor) {
  switch (extractor) {
    case Extractor::Db2: return WaveletFamily::Db2;
    case Extractor::Db4: return WaveletFamily::Db4;
    case Extractor::Coif1: return WaveletFamily::Coif1;
    default: return std::nullopt;
  }
}

namespace {

// Positive-frequency bins 1..floor(N/2) of |X|^2 / N.
std::vector<double> band_psd(std::span<const double> coeffs) {
  const std::size_t n = coeffs.size();
  auto power = power_bins(coeffs, n);
  std::vector<double> psd(power.begin() + 1, power.end());
  for (double& p : psd) p /= static_cast<double>(n);
  return psd;
}

double entropy_of_weights(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return 0.0;
  double h = 0.0;
  for (double w : weights) {
    if (w <= 0.0) continue;
    const double p = w / total;
    h -= p * std::log(p);
  }
  return h;
}

constexpr const char* kBandStatNames[] = {
    "mean",     "median",   "std",  "variance", "energy",          "psd_max",
    "psd_min",  "shannon_entropy",  "iqr",      "kurtosis",        "total_variation",
    "max",      "min",      "relative_power",   "spectral_entropy"};

}  // namespace

double shannon_entropy(std::span<const double> coeffs, EntropyForm form) {
  if (coeffs.empty()) throw std::invalid_argument("entropy of an empty band");
  if (form == EntropyForm::Raw) {
    double h = 0.0;
    for (double c : coeffs) {
      const double sq = c * c;
      if (sq > 0.0) h -= sq * std::log(sq);
    }
    return h;
  }
  std::vector<double> sq(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), sq.begin(), [](double c) { return c * c; });
  return entropy_of_weights(sq);
}

double spectral_entropy(std::span<const double> coeffs) {
  if (coeffs.size() < 2) return 0.0;
  return entropy_of_weights(band_psd(coeffs));
}

BandStatistics band_statistics(std::span<const double> coeffs, EntropyForm entropy) {
  if (coeffs.size() < 4) {
    throw std::invalid_argument(
        fmt::format("band statistics need at least 4 coefficients, got {}", coeffs.size()));
  }
  const double n = static_cast<double>(coeffs.size());
  BandStatistics s;
  s.mean = mean(coeffs);

  double m2 = 0.0;
  double m4 = 0.0;
  double sq = 0.0;
  for (double x : coeffs) {
    const double d = x - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
    sq += x * x;
  }
  s.variance = m2 / n;
  s.std = std::sqrt(s.variance);
  s.energy = sq / n;
  s.kurtosis = s.variance > 0.0 ? m4 / (n * s.variance * s.variance) : 0.0;

  const auto sorted = sorted_copy(coeffs);
  s.median = quantile_sorted(sorted, 0.5);
  s.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  for (std::size_t i = 1; i < coeffs.size(); ++i) s.total_variation += std::abs(coeffs[i] - coeffs[i - 1]);

  const auto psd = band_psd(coeffs);
  const auto [lo, hi] = std::minmax_element(psd.begin(), psd.end());
  s.psd_min = *lo;
  s.psd_max = *hi;
  s.shannon_entropy = shannon_entropy(coeffs, entropy);
  return s;
}

std::vector<std::string> feature_names(Extractor extractor, const FeatureConfig& config,
                                       std::size_t signal_length) {
  std::vector<std::string> names;
  if (extractor == Extractor::Wfe) {
    names.reserve(signal_length);
    for (std::size_t i = 0; i < signal_length; ++i) names.push_back(fmt::format("s{}", i));
    return names;
  }
  if (extractor == Extractor::Mfcc) return mfcc_feature_names(config.mfcc);

  std::vector<std::string> bands{fmt::format("A{}", config.levels)};
  for (int level = config.levels; level >= 1; --level) bands.push_back(fmt::format("D{}", level));
  for (const auto& band : bands) {
    for (const char* stat : kBandStatNames) names.push_back(fmt::format("{}_{}", band, stat));
  }
  return names;
}

FeatureVector assemble_features(const EegSignal& signal, Extractor extractor,
                                const FeatureConfig& config) {
  FeatureVector fv;
  fv.extractor = extractor;
  fv.names = feature_names(extractor, config, signal.samples.size());

  if (extractor == Extractor::Wfe) {
    fv.values = signal.samples;
    return fv;
  }
  if (extractor == Extractor::Mfcc) {
    fv.values = mfcc_features(signal.samples, signal.sample_rate, config.mfcc);
    return fv;
  }

  const WaveletFilter filter = filter_for(*wavelet_of(extractor));
  std::vector<double> x = signal.samples;
  if (config.denoise) x = denoise(x, filter, config.denoising);
  const SubBands sb = wavedec(x, filter, config.levels, config.mode, signal.sample_rate);

  double total_energy = 0.0;
  std::vector<double> band_energy;
  for (const auto& band : sb.bands) {
    double e = 0.0;
    for (double c : band) e += c * c;
    band_energy.push_back(e);
    total_energy += e;
  }

  fv.values.reserve(fv.names.size());
  for (std::size_t b = 0; b < sb.bands.size(); ++b) {
    const auto& band = sb.bands[b];
    const BandStatistics s = band_statistics(band, config.entropy);
    const auto [lo, hi] = std::minmax_element(band.begin(), band.end());
    const double relative = total_energy > 0.0 ? band_energy[b] / total_energy : 0.0;
    fv.values.insert(fv.values.end(),
                     {s.mean, s.median, s.std, s.variance, s.energy, s.psd_max, s.psd_min,
                      s.shannon_entropy, s.iqr, s.kurtosis, s.total_variation, *hi, *lo, relative,
                      spectral_entropy(band)});
  }
  return fv;
}

FeatureMatrix extract_matrix(const LabeledDataset& dataset, Extractor extractor,
                             const FeatureConfig& config, int jobs) {
  if (dataset.instances.empty()) throw std::invalid_argument("cannot extract an empty dataset");
  FeatureMatrix m;
  m.extractor = extractor;
  m.labels = dataset.labels;
  for (const auto& s : dataset.instances) m.source_ids.push_back(s.source_id);

  const FeatureVector first = assemble_features(dataset.instances.front(), extractor, config);
  m.names = first.names;
  const auto rows = static_cast<Eigen::Index>(dataset.size());
  const auto cols = static_cast<Eigen::Index>(first.values.size());
  m.values.resize(rows, cols);
  m.values.row(0) = Eigen::Map<const Eigen::RowVectorXd>(first.values.data(), cols);

  std::atomic<std::size_t> next{1};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < dataset.size(); i = next++) {
      try {
        const FeatureVector fv = assemble_features(dataset.instances[i], extractor, config);
        if (fv.values.size() != static_cast<std::size_t>(cols)) {
          throw DataError(fmt::format("instance '{}' produced {} features, expected {}",
                                      dataset.instances[i].source_id, fv.values.size(), cols));
        }
        for (double v : fv.values) {
          if (!std::isfinite(v)) {
            throw DataError(fmt::format("instance '{}' produced a non-finite feature",
                                        dataset.instances[i].source_id));
          }
        }
        m.values.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::RowVectorXd>(fv.values.data(), cols);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = dataset.size();
      }
    }
  };
  const int workers = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return m;
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix) {
  for (const auto& name : matrix.names) out << name << ',';
  out << "label\n";
  for (Eigen::Index r = 0; r < matrix.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.values.cols(); ++c) {
      out << fmt::format("{:.17g}", matrix.values(r, c)) << ',';
    }
    out << matrix.labels[static_cast<std::size_t>(r)] << '\n';
  }
}

}  // namespace sbench
