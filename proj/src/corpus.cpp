// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "sbench/error.hpp"
#include "sbench/random.hpp"

namespace sbench {

namespace fs = std::filesystem;

char to_char(SetTag tag) {
  switch (tag) {
    case SetTag::Z: return 'Z';
    case SetTag::O: return 'O';
    case SetTag::N: return 'N';
    case SetTag::F: return 'F';
    case SetTag::S: return 'S';
  }
  return '?';
}

std::optional<SetTag> parse_set_tag(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'Z': return SetTag::Z;
    case 'O': return SetTag::O;
    case 'N': return SetTag::N;
    case 'F': return SetTag::F;
    case 'S': return SetTag::S;
    default: return std::nullopt;
  }
}

namespace {

void emit_warning(const LoadOptions& options, const std::string& message) {
  if (options.warn) {
    options.warn(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

std::optional<SetTag> infer_tag(const fs::path& path) {
  const std::string dir = path.parent_path().filename().string();
  if (dir.size() == 1) {
    if (auto tag = parse_set_tag(dir[0])) return tag;
  }
  const std::string name = path.filename().string();
  if (!name.empty()) return parse_set_tag(name[0]);
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> parse_samples(std::string_view text, std::string_view origin) {
  std::vector<double> samples;
  samples.reserve(kBonnSamples);
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    line = trim(line);
    if (line.empty()) continue;
    std::string_view digits = line;
    if (digits.front() == '+') digits.remove_prefix(1);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw DataError(fmt::format("{}:{}: not an integer sample: '{}'", origin, line_no, line));
    }
    samples.push_back(static_cast<double>(value));
  }
  return samples;
}

EegSignal load_signal(const fs::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open signal file '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const auto tag = infer_tag(path);
  if (!tag) {
    throw DataError(fmt::format("cannot infer set tag (Z/O/N/F/S) for '{}'", path.string()));
  }

  EegSignal signal;
  signal.samples = parse_samples(text, path.string());
  signal.sample_rate = kBonnSampleRate;
  signal.set_tag = *tag;
  signal.source_id = path.filename().string();

  if (options.expected_samples != 0 && signal.samples.size() != options.expected_samples) {
    const std::string message =
        fmt::format("'{}' has {} samples, expected {}", path.string(), signal.samples.size(),
                    options.expected_samples);
    if (options.mode == ParseMode::Strict) throw DataError(message);
    emit_warning(options, message);
  }
  if (signal.samples.empty()) {
    throw DataError(fmt::format("'{}' contains no samples", path.string()));
  }
  return signal;
}

Corpus load_corpus(const fs::path& root, const LoadOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw DataError(fmt::format("corpus root '{}' is not a directory", root.string()));
  }

  std::map<SetTag, std::vector<fs::path>> files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    if (it.depth() > 1) {
      it.disable_recursion_pending();
      continue;
    }
    if (!it->is_regular_file()) continue;
    const fs::path& p = it->path();
    if (p.filename().string().starts_with('.')) continue;
    if (auto tag = infer_tag(p)) files[*tag].push_back(p);
  }

  std::string missing;
  for (SetTag tag : kAllSetTags) {
    if (files.contains(tag)) continue;
    if (!missing.empty()) missing += ',';
    missing += to_char(tag);
  }
  if (!missing.empty()) {
    throw DataError(
        fmt::format("corpus '{}' is missing set(s): {}", root.string(), missing));
  }

  Corpus corpus;
  for (auto& [tag, paths] : files) {
    std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
      return a.filename().string() < b.filename().string();
    });
    if (options.expected_per_set != 0 && paths.size() != options.expected_per_set) {
      const std::string message = fmt::format("set {} has {} files, expected {}", to_char(tag),
                                              paths.size(), options.expected_per_set);
      if (options.mode == ParseMode::Strict) throw DataError(message);
      emit_warning(options, message);
    }
    auto& signals = corpus[tag];
    signals.reserve(paths.size());
    for (const auto& p : paths) {
      EegSignal s = load_signal(p, options);
      s.set_tag = tag;
      signals.push_back(std::move(s));
    }
  }
  return corpus;
}

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::Imbalanced ? "imbalanced" : "balanced";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  if (name == "imbalanced") return Scheme::Imbalanced;
  if (name == "balanced") return Scheme::Balanced;
  return std::nullopt;
}

std::size_t LabeledDataset::positives() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

std::vector<EegSignal> window_signal(const EegSignal& signal, const WindowOptions& options) {
  if (options.length == 0 || options.stride == 0) {
    throw std::invalid_argument("window length and stride must be positive");
  }
  std::vector<EegSignal> windows;
  const auto& x = signal.samples;
  for (std::size_t start = 0, w = 0; start + options.length <= x.size();
       start += options.stride, ++w) {
    EegSignal piece;
    piece.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(start),
                         x.begin() + static_cast<std::ptrdiff_t>(start + options.length));
    piece.sample_rate = signal.sample_rate;
    piece.set_tag = signal.set_tag;
    piece.source_id = fmt::format("{}#w{}", signal.source_id, w);
    windows.push_back(std::move(piece));
  }
  return windows;
}

LabeledDataset build_dataset(const Corpus& corpus, Scheme scheme, std::uint64_t seed,
                             const std::optional<WindowOptions>& windows) {
  for (SetTag tag : kAllSetTags) {
    if (!corpus.contains(tag) || corpus.at(tag).empty()) {
      throw DataError(fmt::format("corpus has no signals for set {}", to_char(tag)));
    }
  }

  std::vector<const EegSignal*> chosen;
  if (scheme == Scheme::Imbalanced) {
    for (SetTag tag : kAllSetTags) {
      for (const auto& s : corpus.at(tag)) chosen.push_back(&s);
    }
  } else {
    const auto& positives = corpus.at(SetTag::S);
    if (positives.size() % kNegativeSetTags.size() != 0) {
      throw DataError(fmt::format("balanced scheme needs a positive count divisible by 4, got {}",
                                  positives.size()));
    }
    const std::size_t per_set = positives.size() / kNegativeSetTags.size();
    Rng rng(seed);
    for (SetTag tag : kNegativeSetTags) {
      const auto& pool = corpus.at(tag);
      if (pool.size() < per_set) {
        throw DataError(fmt::format("set {} has {} signals, balanced scheme needs {}",
                                    to_char(tag), pool.size(), per_set));
      }
      std::vector<std::size_t> idx(pool.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      rng.shuffle(std::span<std::size_t>(idx));
      idx.resize(per_set);
      std::sort(idx.begin(), idx.end());
      for (std::size_t i : idx) chosen.push_back(&pool[i]);
    }
    for (const auto& s : positives) chosen.push_back(&s);
  }

  LabeledDataset out;
  out.scheme = scheme;
  out.seed = seed;
  for (const EegSignal* s : chosen) {
    if (windows) {
      for (auto& w : window_signal(*s, *windows)) {
        out.labels.push_back(label_for(w.set_tag));
        out.instances.push_back(std::move(w));
      }
    } else {
      out.instances.push_back(*s);
      out.labels.push_back(label_for(s->set_tag));
    }
  }
  return out;
}

void write_manifest(std::ostream& out, const LabeledDataset& dataset) {
  out << "source_id,set_tag,label,scheme,seed\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset.instances[i];
    out << s.source_id << ',' << to_char(s.set_tag) << ',' << dataset.labels[i] << ','
        << to_string(dataset.scheme) << ',' << dataset.seed << '\n';
  }
}

}  // namespace sbench
