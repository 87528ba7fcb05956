// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "sbench/error.hpp"
#include "sbench/random.hpp"
#include "sbench/seed.hpp"

namespace sbench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> make_signal(SetTag tag, const SynthOptions& options, Rng& rng) {
  const double fs = kBonnSampleRate;
  const std::size_t n = options.samples;
  std::vector<double> x(n, 0.0);

  // Slow drift plus broadband noise shared by every set.
  const double drift_f = 0.2 + 0.3 * rng.uniform();
  const double drift_phase = kTwoPi * rng.uniform();
  double ar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ar = 0.7 * ar + options.noise * rng.normal();
    x[i] = ar + 15.0 * std::sin(kTwoPi * drift_f * i / fs + drift_phase);
  }

  const auto add_rhythm = [&](double f_lo, double f_hi, double amp_lo, double amp_hi) {
    const double f = f_lo + (f_hi - f_lo) * rng.uniform();
    const double amp = amp_lo + (amp_hi - amp_lo) * rng.uniform();
    const double phase = kTwoPi * rng.uniform();
    const double wobble = 0.05 + 0.1 * rng.uniform();
    for (std::size_t i = 0; i < n; ++i) {
      const double t = i / fs;
      const double envelope = 1.0 + 0.3 * std::sin(kTwoPi * wobble * t);
      x[i] += amp * envelope * std::sin(kTwoPi * f * t + phase);
    }
  };

  const auto add_spike = [&](std::size_t at, double amp, double width) {
    const auto lo = static_cast<std::ptrdiff_t>(at) - static_cast<std::ptrdiff_t>(4 * width);
    const auto hi = static_cast<std::ptrdiff_t>(at) + static_cast<std::ptrdiff_t>(4 * width);
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0);
         i < std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(n)); ++i) {
      const double d = (static_cast<double>(i) - static_cast<double>(at)) / width;
      x[static_cast<std::size_t>(i)] += amp * std::exp(-0.5 * d * d);
    }
  };

  switch (tag) {
    case SetTag::Z:
      add_rhythm(8.5, 12.0, 40.0, 70.0);
      break;
    case SetTag::O:
      add_rhythm(8.0, 11.0, 20.0, 40.0);
      add_rhythm(15.0, 25.0, 10.0, 20.0);
      break;
    case SetTag::N:
    case SetTag::F: {
      add_rhythm(4.0, 7.5, 30.0, 60.0);
      const std::size_t spikes = 2 + rng.index(tag == SetTag::F ? 8 : 4);
      for (std::size_t s = 0; s < spikes; ++s) {
        add_spike(rng.index(n), (rng.uniform() < 0.5 ? -1.0 : 1.0) * (80.0 + 80.0 * rng.uniform()),
                  2.0 + 2.0 * rng.uniform());
      }
      break;
    }
    case SetTag::S: {
      add_rhythm(2.5, 5.0, 150.0, 350.0);
      const double f = 2.5 + 1.5 * rng.uniform();
      const double amp = 200.0 + 300.0 * rng.uniform();
      const double period = fs / f;
      for (double at = period * rng.uniform(); at < static_cast<double>(n); at += period) {
        add_spike(static_cast<std::size_t>(at), -amp, 2.5);
      }
      break;
    }
  }

  for (double& v : x) v = std::round(v);
  return x;
}

}  // namespace

Corpus synthesize_corpus(const SynthOptions& options) {
  if (options.samples == 0 || options.signals_per_set == 0) {
    throw std::invalid_argument("synthetic corpus needs positive sizes");
  }
  Corpus corpus;
  for (SetTag tag : kAllSetTags) {
    auto& signals = corpus[tag];
    for (std::size_t k = 0; k < options.signals_per_set; ++k) {
      Rng rng(SeedKey(options.seed).add(std::string(1, to_char(tag))).add(k).value());
      EegSignal s;
      s.samples = make_signal(tag, options, rng);
      s.set_tag = tag;
      s.source_id = fmt::format("{}{:03}.txt", to_char(tag), k + 1);
      signals.push_back(std::move(s));
    }
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& root, const Corpus& corpus) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw DataError(fmt::format("cannot create '{}': {}", root.string(), ec.message()));
  for (const auto& [tag, signals] : corpus) {
    const fs::path dir = root / std::string(1, to_char(tag));
    fs::create_directories(dir, ec);
    if (ec) throw DataError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    for (std::size_t k = 0; k < signals.size(); ++k) {
      const std::string name = signals[k].source_id.empty()
                                   ? fmt::format("{}{:03}.txt", to_char(tag), k + 1)
                                   : signals[k].source_id;
      std::ofstream out(dir / name);
      if (!out) throw DataError(fmt::format("cannot write '{}'", (dir / name).string()));
      for (double v : signals[k].samples) out << fmt::format("{}\n", static_cast<long>(v));
    }
  }
}

}  // namespace sbench
