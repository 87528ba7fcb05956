// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "sbench/descriptive.hpp"

namespace sbench {

std::string_view to_string(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::Haar: return "haar";
    case WaveletFamily::Db2: return "db2";
    case WaveletFamily::Db4: return "db4";
    case WaveletFamily::Coif1: return "coif1";
  }
  return "?";
}

std::optional<WaveletFamily> parse_wavelet_family(std::string_view name) {
  if (name == "haar") return WaveletFamily::Haar;
  if (name == "db2") return WaveletFamily::Db2;
  if (name == "db4") return WaveletFamily::Db4;
  if (name == "coif1") return WaveletFamily::Coif1;
  return std::nullopt;
}

std::string_view to_string(ExtensionMode mode) {
  return mode == ExtensionMode::Periodized ? "periodized" : "symmetric";
}

std::optional<ExtensionMode> parse_extension_mode(std::string_view name) {
  if (name == "periodized") return ExtensionMode::Periodized;
  if (name == "symmetric") return ExtensionMode::Symmetric;
  return std::nullopt;
}

namespace {

std::vector<double> scaling_coefficients(WaveletFamily family) {
  const double r2 = std::sqrt(2.0);
  switch (family) {
    case WaveletFamily::Haar:
      return {1.0 / r2, 1.0 / r2};
    case WaveletFamily::Db2: {
      const double r3 = std::sqrt(3.0);
      const double s = 4.0 * r2;
      return {(1.0 + r3) / s, (3.0 + r3) / s, (3.0 - r3) / s, (1.0 - r3) / s};
    }
    case WaveletFamily::Db4:
      // Minimum-phase spectral factor, computed at 40 digits.
      return {0.2303778133088965008633,  0.7148465705529156470899,
              0.6308807679298589078817,  -0.02798376941685985421141,
              -0.1870348117190930840796, 0.03084138183556076362722,
              0.03288301166688519973541, -0.01059740178506903210488};
    case WaveletFamily::Coif1: {
      const double r7 = std::sqrt(7.0);
      const double s = 16.0 * r2;
      return {(r7 - 3.0) / s,       (1.0 - r7) / s, (14.0 - 2.0 * r7) / s,
              (14.0 + 2.0 * r7) / s, (5.0 + r7) / s, (1.0 - r7) / s};
    }
  }
  throw std::invalid_argument("unsupported wavelet family");
}

int moments_of(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::Haar: return 1;
    case WaveletFamily::Db2: return 2;
    case WaveletFamily::Db4: return 4;
    case WaveletFamily::Coif1: return 2;
  }
  return 0;
}

// Half-sample symmetric reflection of index j into [0, n).
std::size_t reflect(long j, std::size_t n) {
  const long period = 2 * static_cast<long>(n);
  long r = j % period;
  if (r < 0) r += period;
  if (r >= static_cast<long>(n)) r = period - 1 - r;
  return static_cast<std::size_t>(r);
}

}  // namespace

WaveletFilter filter_for(WaveletFamily family) {
  WaveletFilter f;
  f.family = family;
  f.lo_dec = scaling_coefficients(family);
  f.vanishing_moments = moments_of(family);
  const std::size_t len = f.lo_dec.size();
  f.hi_dec.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    f.hi_dec[i] = sign * f.lo_dec[len - 1 - i];
  }
  f.lo_rec.assign(f.lo_dec.rbegin(), f.lo_dec.rend());
  f.hi_rec.assign(f.hi_dec.rbegin(), f.hi_dec.rend());
  return f;
}

WaveletFilter filter_for(std::string_view family_name) {
  const auto family = parse_wavelet_family(family_name);
  if (!family) {
    throw std::invalid_argument(
        fmt::format("unsupported wavelet family '{}' (expected haar, db2, db4 or coif1)",
                    family_name));
  }
  return filter_for(*family);
}

namespace {

// Odd-length periodized levels are mapped isometrically into n + 1 samples:
// zero pad, then apply the Householder reflection that takes the padded
// constant direction onto the constant direction of length n + 1. Energy is
// preserved and constant signals stay constant.
struct OddEmbedding {
  std::vector<double> w;
  double w_norm_sq = 0.0;

  explicit OddEmbedding(std::size_t n) : w(n + 1) {
    const double rn = std::sqrt(static_cast<double>(n));
    const double rn1 = std::sqrt(static_cast<double>(n + 1));
    const double head = 1.0 / (rn * rn1 * (rn1 + rn));
    std::fill(w.begin(), w.end() - 1, head);
    w.back() = -1.0 / rn1;
    w_norm_sq = 2.0 * (1.0 / static_cast<double>(n + 1)) / (1.0 + rn / rn1);
  }

  void reflect(std::vector<double>& y) const {
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += w[i] * y[i];
    const double scale = 2.0 * dot / w_norm_sq;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= scale * w[i];
  }
};

std::vector<double> embed_odd(std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  y.push_back(0.0);
  OddEmbedding(x.size()).reflect(y);
  return y;
}

std::vector<double> unembed_odd(std::vector<double> y) {
  OddEmbedding(y.size() - 1).reflect(y);
  y.pop_back();
  return y;
}

}  // namespace

LevelCoeffs analyze_level(std::span<const double> signal, const WaveletFilter& filter,
                          ExtensionMode mode) {
  const std::size_t n = signal.size();
  const std::size_t len = filter.length();
  if (n < len) {
    throw std::invalid_argument(
        fmt::format("signal of length {} is shorter than the {}-tap {} filter", n, len,
                    to_string(filter.family)));
  }
  LevelCoeffs out;
  if (mode == ExtensionMode::Periodized) {
    std::vector<double> embedded;
    if (n % 2 == 1) {
      embedded = embed_odd(signal);
      signal = embedded;
    }
    const std::size_t padded = signal.size();
    const std::size_t m_count = padded / 2;
    out.approx.assign(m_count, 0.0);
    out.detail.assign(m_count, 0.0);
    for (std::size_t m = 0; m < m_count; ++m) {
      double a = 0.0;
      double d = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const std::size_t j = (2 * m + k) % padded;
        a += filter.lo_dec[k] * signal[j];
        d += filter.hi_dec[k] * signal[j];
      }
      out.approx[m] = a;
      out.detail[m] = d;
    }
  } else {
    const std::size_t m_count = (n + len - 1) / 2;
    out.approx.assign(m_count, 0.0);
    out.detail.assign(m_count, 0.0);
    const long shift = 2 - static_cast<long>(len);
    for (std::size_t m = 0; m < m_count; ++m) {
      double a = 0.0;
      double d = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const double x = signal[reflect(2 * static_cast<long>(m) + static_cast<long>(k) + shift, n)];
        a += filter.lo_dec[k] * x;
        d += filter.hi_dec[k] * x;
      }
      out.approx[m] = a;
      out.detail[m] = d;
    }
  }
  return out;
}

std::vector<double> synthesize_level(std::span<const double> approx,
                                     std::span<const double> detail,
                                     const WaveletFilter& filter, ExtensionMode mode,
                                     std::size_t output_length) {
  if (approx.size() != detail.size()) {
    throw std::invalid_argument("approximation and detail lengths differ");
  }
  const std::size_t len = filter.length();
  const std::size_t m_count = approx.size();
  std::vector<double> x(output_length, 0.0);
  if (mode == ExtensionMode::Periodized) {
    const std::size_t padded = 2 * m_count;
    if (output_length != padded && output_length + 1 != padded) {
      throw std::invalid_argument(fmt::format(
          "inconsistent bookkeeping: {} coefficients cannot rebuild {} samples", m_count,
          output_length));
    }
    std::vector<double> y(padded, 0.0);
    for (std::size_t m = 0; m < m_count; ++m) {
      for (std::size_t k = 0; k < len; ++k) {
        const std::size_t j = (2 * m + k) % padded;
        y[j] += approx[m] * filter.lo_rec[len - 1 - k] + detail[m] * filter.hi_rec[len - 1 - k];
      }
    }
    return output_length == padded ? y : unembed_odd(std::move(y));
  } else {
    if (m_count != (output_length + len - 1) / 2) {
      throw std::invalid_argument(fmt::format(
          "inconsistent bookkeeping: {} coefficients cannot rebuild {} samples", m_count,
          output_length));
    }
    const long shift = 2 - static_cast<long>(len);
    for (std::size_t m = 0; m < m_count; ++m) {
      for (std::size_t k = 0; k < len; ++k) {
        const long j = 2 * static_cast<long>(m) + static_cast<long>(k) + shift;
        if (j < 0 || j >= static_cast<long>(output_length)) continue;
        x[static_cast<std::size_t>(j)] +=
            approx[m] * filter.lo_rec[len - 1 - k] + detail[m] * filter.hi_rec[len - 1 - k];
      }
    }
  }
  return x;
}

std::vector<std::string> SubBands::band_names() const {
  std::vector<std::string> names;
  const int l = levels();
  names.push_back(fmt::format("A{}", l));
  for (int level = l; level >= 1; --level) names.push_back(fmt::format("D{}", level));
  return names;
}

std::vector<FrequencyRange> SubBands::frequency_ranges() const {
  std::vector<FrequencyRange> ranges;
  const int l = levels();
  const double nyquist = sample_rate / 2.0;
  ranges.push_back({0.0, nyquist / std::ldexp(1.0, l)});
  for (int level = l; level >= 1; --level) {
    ranges.push_back({nyquist / std::ldexp(1.0, level), nyquist / std::ldexp(1.0, level - 1)});
  }
  return ranges;
}

std::vector<std::string> SubBands::nominal_labels() const {
  constexpr double kNominalNyquist = 64.0;
  std::vector<std::string> labels;
  const int l = levels();
  labels.push_back(fmt::format("0-{:g} Hz", kNominalNyquist / std::ldexp(1.0, l)));
  for (int level = l; level >= 1; --level) {
    labels.push_back(fmt::format("{:g}-{:g} Hz", kNominalNyquist / std::ldexp(1.0, level),
                                 kNominalNyquist / std::ldexp(1.0, level - 1)));
  }
  return labels;
}

SubBands wavedec(std::span<const double> signal, const WaveletFilter& filter, int levels,
                 ExtensionMode mode, double sample_rate) {
  if (levels < 1) throw std::invalid_argument("decomposition needs at least one level");
  if (levels >= 63 || (std::size_t{1} << levels) > signal.size()) {
    throw std::invalid_argument(fmt::format("too many levels ({}) for a signal of length {}",
                                            levels, signal.size()));
  }
  SubBands out;
  out.mode = mode;
  out.family = filter.family;
  out.sample_rate = sample_rate;

  std::vector<std::vector<double>> details;
  std::vector<double> current(signal.begin(), signal.end());
  for (int level = 1; level <= levels; ++level) {
    if (current.size() < filter.length()) {
      throw std::invalid_argument(fmt::format(
          "too many levels ({}) for a signal of length {}: level {} input has {} samples, "
          "fewer than the {} filter taps",
          levels, signal.size(), level, current.size(), filter.length()));
    }
    out.level_lengths.push_back(current.size());
    auto step = analyze_level(current, filter, mode);
    details.push_back(std::move(step.detail));
    current = std::move(step.approx);
  }
  out.bands.push_back(std::move(current));
  for (auto it = details.rbegin(); it != details.rend(); ++it) out.bands.push_back(std::move(*it));
  return out;
}

std::vector<double> waverec(const SubBands& subbands, const WaveletFilter& filter) {
  const int levels = subbands.levels();
  if (levels < 1 || subbands.bands.size() != static_cast<std::size_t>(levels) + 1) {
    throw std::invalid_argument(fmt::format("inconsistent bookkeeping: {} bands for {} levels",
                                            subbands.bands.size(), levels));
  }
  if (subbands.family != filter.family) {
    throw std::invalid_argument(fmt::format("sub-bands were produced by {} but filter is {}",
                                            to_string(subbands.family),
                                            to_string(filter.family)));
  }
  std::vector<double> current = subbands.bands.front();
  for (int level = levels; level >= 1; --level) {
    const auto& detail = subbands.bands[static_cast<std::size_t>(levels - level + 1)];
    const std::size_t out_len = subbands.level_lengths[static_cast<std::size_t>(level - 1)];
    current = synthesize_level(current, detail, filter, subbands.mode, out_len);
  }
  return current;
}

double universal_threshold(std::span<const double> finest_detail, std::size_t n) {
  if (finest_detail.empty()) throw std::invalid_argument("empty detail band");
  if (n < 2) throw std::invalid_argument("universal threshold needs n >= 2");
  std::vector<double> magnitudes(finest_detail.size());
  std::transform(finest_detail.begin(), finest_detail.end(), magnitudes.begin(),
                 [](double c) { return std::abs(c); });
  const double sigma = median(magnitudes) / 0.6745;
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

std::vector<double> denoise(std::span<const double> signal, const WaveletFilter& filter,
                            const DenoiseOptions& options) {
  SubBands sb = wavedec(signal, filter, options.levels, options.mode);
  const double lambda = universal_threshold(sb.finest_detail(), signal.size());
  for (std::size_t b = 1; b < sb.bands.size(); ++b) {
    for (double& c : sb.bands[b]) {
      c = options.rule == ThresholdRule::Soft ? soft_threshold(c, lambda)
                                              : hard_threshold(c, lambda);
    }
  }
  return waverec(sb, filter);
}

EegSignal denoise(const EegSignal& signal, const WaveletFilter& filter,
                  const DenoiseOptions& options) {
  EegSignal out = signal;
  out.samples = denoise(signal.samples, filter, options);
  return out;
}

void write_subbands_csv(std::ostream& out, const SubBands& subbands) {
  const auto names = subbands.band_names();
  out << "band,index,coefficient\n";
  for (std::size_t b = 0; b < subbands.bands.size(); ++b) {
    for (std::size_t i = 0; i < subbands.bands[b].size(); ++i) {
      out << names[b] << ',' << i << ',' << fmt::format("{:.17g}", subbands.bands[b][i]) << '\n';
    }
  }
}

}  // namespace sbench
