// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include <filesystem>
#include <fstream>
#include <map>
#include <cmath>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "sbench/corpus.hpp"
#include "sbench/error.hpp"
#include "sbench/synthetic.hpp"

namespace sbench {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    static int counter = 0;
    path_ = fs::temp_directory_path() / fmt::format("sbench_{}_{}_{}_{}", info->test_suite_name(),
                                                    info->name(), ::getpid(), counter++);
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

std::string bonn_text(std::size_t n, bool trailing_blank = false) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += fmt::format("{}\n", static_cast<int>(i % 50) - 12);
  if (trailing_blank) s += "\n";
  return s;
}

Corpus small_corpus(std::size_t per_set) {
  SynthOptions opts;
  opts.signals_per_set = per_set;
  opts.samples = 256;
  return synthesize_corpus(opts);
}

TEST(Parse, IntegerLines) {
  const auto x = parse_samples("-12\n3\n+4\r\n  0 \n", "t");
  EXPECT_EQ(x, (std::vector<double>{-12, 3, 4, 0}));
  EXPECT_THROW(parse_samples("1\n2.5\n", "t"), DataError);
  EXPECT_THROW(parse_samples("1\nabc\n", "t"), DataError);
}

TEST(LoadSignal, FullLength) {
  TempDir dir;
  write_text(dir.path() / "Z" / "Z001.txt", bonn_text(4097));
  const auto s = load_signal(dir.path() / "Z" / "Z001.txt");
  EXPECT_EQ(s.samples.size(), 4097u);
  EXPECT_EQ(s.samples.front(), -12.0);
  EXPECT_EQ(s.set_tag, SetTag::Z);
  EXPECT_NEAR(s.duration_seconds(), 23.6, 0.01);
}

TEST(LoadSignal, TrailingBlankLine) {
  TempDir dir;
  write_text(dir.path() / "S" / "S001.txt", bonn_text(4097));
  write_text(dir.path() / "S" / "S002.txt", bonn_text(4097, true));
  EXPECT_EQ(load_signal(dir.path() / "S" / "S001.txt").samples,
            load_signal(dir.path() / "S" / "S002.txt").samples);
}

TEST(LoadSignal, TagFromFileName) {
  TempDir dir;
  write_text(dir.path() / "n042.txt", bonn_text(4097));
  EXPECT_EQ(load_signal(dir.path() / "n042.txt").set_tag, SetTag::N);
}

TEST(LoadSignal, StrictAndLenientLength) {
  TempDir dir;
  write_text(dir.path() / "F" / "F001.txt", bonn_text(4000));
  EXPECT_THROW(load_signal(dir.path() / "F" / "F001.txt"), DataError);
  std::vector<std::string> warnings;
  LoadOptions lenient;
  lenient.mode = ParseMode::Lenient;
  lenient.warn = [&](const std::string& m) { warnings.push_back(m); };
  EXPECT_EQ(load_signal(dir.path() / "F" / "F001.txt", lenient).samples.size(), 4000u);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(LoadCorpus, EmptyDirectoryListsMissingTags) {
  TempDir dir;
  try {
    load_corpus(dir.path());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Z,O,N,F,S"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, FiveByN) {
  TempDir dir;
  const auto corpus = small_corpus(6);
  write_corpus(dir.path(), corpus);
  LoadOptions opts;
  opts.expected_per_set = 6;
  opts.expected_samples = 256;
  const auto loaded = load_corpus(dir.path(), opts);
  ASSERT_EQ(loaded.size(), 5u);
  for (SetTag tag : kAllSetTags) EXPECT_EQ(loaded.at(tag).size(), 6u);
  EXPECT_EQ(loaded, corpus);
}

TEST(LoadCorpus, OrderIndependentOfCreationOrder) {
  TempDir a;
  TempDir b;
  const auto corpus = small_corpus(5);
  write_corpus(a.path(), corpus);
  for (auto& [tag, signals] : corpus) {
    for (auto it = signals.rbegin(); it != signals.rend(); ++it) {
      const fs::path p = b.path() / std::string(1, to_char(tag)) / it->source_id;
      fs::create_directories(p.parent_path());
      fs::copy_file(a.path() / std::string(1, to_char(tag)) / it->source_id, p);
    }
  }
  LoadOptions opts;
  opts.expected_per_set = 5;
  opts.expected_samples = 256;
  EXPECT_EQ(load_corpus(a.path(), opts), load_corpus(b.path(), opts));
}

TEST(BuildDataset, Imbalanced) {
  const auto ds = build_dataset(small_corpus(100), Scheme::Imbalanced, 3);
  EXPECT_EQ(ds.size(), 500u);
  EXPECT_EQ(ds.positives(), 100u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(ds.labels[i], ds.instances[i].set_tag == SetTag::S ? 1 : 0);
  }
}

TEST(BuildDataset, BalancedComposition) {
  const auto ds = build_dataset(small_corpus(100), Scheme::Balanced, 3);
  EXPECT_EQ(ds.size(), 200u);
  EXPECT_EQ(ds.positives(), 100u);
  std::map<SetTag, int> counts;
  for (const auto& s : ds.instances) ++counts[s.set_tag];
  for (SetTag tag : kNegativeSetTags) EXPECT_EQ(counts[tag], 25) << to_char(tag);
}

TEST(BuildDataset, BalancedDeterministicPerSeed) {
  const auto corpus = small_corpus(100);
  const auto a = build_dataset(corpus, Scheme::Balanced, 11);
  const auto b = build_dataset(corpus, Scheme::Balanced, 11);
  const auto c = build_dataset(corpus, Scheme::Balanced, 12);
  EXPECT_EQ(a.instances, b.instances);
  EXPECT_NE(a.instances, c.instances);
}

TEST(BuildDataset, Windowing) {
  const auto ds = build_dataset(small_corpus(4), Scheme::Imbalanced, 1, WindowOptions{100, 50});
  EXPECT_EQ(ds.size(), 20u * 4u);
  EXPECT_EQ(ds.instances.front().samples.size(), 100u);
  EXPECT_EQ(ds.positives(), 16u);
}

TEST(BuildDataset, ManifestCsv) {
  const auto ds = build_dataset(small_corpus(4), Scheme::Balanced, 9);
  std::ostringstream out;
  write_manifest(out, ds);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "source_id,set_tag,label,scheme,seed");
  std::getline(in, line);
  EXPECT_TRUE(line.ends_with(",0,balanced,9")) << line;
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(small_corpus(3), small_corpus(3));
  SynthOptions other;
  other.signals_per_set = 3;
  other.samples = 256;
  other.seed = 2;
  EXPECT_NE(synthesize_corpus(other), small_corpus(3));
}

TEST(Synthetic, IntegerSamples) {
  for (const auto& [tag, signals] : small_corpus(2)) {
    for (const auto& s : signals) {
      for (double v : s.samples) EXPECT_EQ(v, std::round(v));
    }
  }
}

}  // namespace
}  // namespace sbench
