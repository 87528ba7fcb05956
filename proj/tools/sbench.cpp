// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

// Command-line front end: run, validate, features, stats, synth.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sbench/config.hpp"
#include "sbench/error.hpp"
#include "sbench/experiment.hpp"
#include "sbench/report.hpp"
#include "sbench/synthetic.hpp"
#include "sbench/version.hpp"

namespace fs = std::filesystem;
using namespace sbench;

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kCell = 3 };

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> profile;
  std::optional<std::string> output;
  std::optional<std::string> corpus;
  bool quiet = false;
};

ConfigOverrides overrides_of(const RunArgs& a) {
  ConfigOverrides o;
  o.seed = a.seed;
  o.jobs = a.jobs;
  if (a.profile) {
    const auto p = parse_profile(*a.profile);
    if (!p) throw ConfigError(fmt::format("--profile: expected 'custom' or 'reproduction', got '{}'", *a.profile));
    o.profile = p;
  }
  if (a.output) o.output_dir = *a.output;
  if (a.corpus) o.corpus_root = *a.corpus;
  return o;
}

LoadOptions load_options(const RunConfig& config) {
  LoadOptions opts;
  opts.mode = config.parse_mode;
  return opts;
}

int cmd_run(const RunArgs& args) {
  const RunConfig config = load_config(args.config, overrides_of(args));
  const Corpus corpus = load_corpus(config.corpus_root, load_options(config));

  ExperimentOptions options;
  if (!args.quiet) {
    options.progress = [](const CellProgress& p) {
      const auto& c = *p.cell;
      const auto rows = to_long_rows({c});
      double acc = 0.0;
      for (const auto& r : rows) acc += r.accuracy;
      std::cerr << fmt::format("[{:>4}/{}] {:<10} {:<5} {:<3} {:<7} acc {:.4f}\n", p.done,
                               p.total, to_string(c.scheme), to_string(c.extractor),
                               to_string(c.model), c.plan,
                               rows.empty() ? 0.0 : acc / static_cast<double>(rows.size()));
    };
  }
  const auto result = run_experiment(config, corpus, options);
  const auto dir = write_bundle(config, result);
  if (!result.complete()) {
    std::cerr << fmt::format("error: {}\npartial results in {}\n", result.failure.value_or("incomplete run"),
                             dir.string());
    return kCell;
  }
  std::cout << fmt::format("{} cells in {:.1f} s, reports in {}\n", result.cells.size(),
                           result.elapsed_seconds, dir.string());
  return kOk;
}

int cmd_validate(const RunArgs& args) {
  const RunConfig config = load_config(args.config, overrides_of(args));
  std::cout << emit_config(config);
  return kOk;
}

int cmd_features(const RunArgs& args, const std::string& extractor_name,
                 const std::string& scheme_name, const std::string& out_path) {
  const RunConfig config = load_config(args.config, overrides_of(args));
  const auto extractor = parse_extractor(extractor_name);
  if (!extractor) throw ConfigError(fmt::format("--extractor: unknown extractor '{}'", extractor_name));
  const auto scheme = parse_scheme(scheme_name);
  if (!scheme) throw ConfigError(fmt::format("--scheme: unknown scheme '{}'", scheme_name));

  const Corpus corpus = load_corpus(config.corpus_root, load_options(config));
  const auto dataset = build_dataset(corpus, *scheme, dataset_seed(config.seed, *scheme));
  const auto matrix = extract_matrix(dataset, *extractor, config.features, config.jobs);
  if (out_path.empty() || out_path == "-") {
    write_feature_csv(std::cout, matrix);
  } else {
    std::ofstream out(out_path);
    if (!out) throw DataError(fmt::format("cannot write '{}'", out_path));
    write_feature_csv(out, matrix);
    std::cerr << fmt::format("{} x {} features written to {}\n", matrix.rows(), matrix.cols(),
                             out_path);
  }
  return kOk;
}

int cmd_stats(const std::string& csv_path, const std::string& scheme_filter,
              const std::string& out_dir, double alpha) {
  std::ifstream in(csv_path);
  if (!in) throw DataError(fmt::format("cannot read '{}'", csv_path));
  const auto rows = read_long_csv(in);
  if (rows.empty()) throw DataError(fmt::format("'{}' has no rows", csv_path));
  if (!out_dir.empty()) fs::create_directories(out_dir);

  for (const auto& scheme : schemes_in(rows)) {
    if (!scheme_filter.empty() && scheme != scheme_filter) continue;
    const auto report = analyze_scheme(rows, scheme, alpha);
    write_stats_text(std::cout, report);
    std::cout << '\n';
    if (out_dir.empty()) continue;
    const auto write = [&](const std::string& name, auto body) {
      std::ofstream out(fs::path(out_dir) / name);
      if (!out) throw DataError(fmt::format("cannot write '{}'", (fs::path(out_dir) / name).string()));
      body(out);
    };
    write(fmt::format("anova_{}.csv", scheme), [&](std::ostream& o) { write_anova_csv(o, report.anova); });
    write(fmt::format("omega_squared_{}.csv", scheme),
          [&](std::ostream& o) { write_omega_csv(o, report.effects); });
    write(fmt::format("tukey_models_{}.csv", scheme),
          [&](std::ostream& o) { write_tukey_csv(o, report.tukey_models); });
    write(fmt::format("tukey_extractors_{}.csv", scheme),
          [&](std::ostream& o) { write_tukey_csv(o, report.tukey_extractors); });
  }
  return kOk;
}

int cmd_synth(const std::string& dir, std::size_t per_set, std::size_t samples, std::uint64_t seed) {
  SynthOptions opts;
  opts.signals_per_set = per_set;
  opts.samples = samples;
  opts.seed = seed;
  write_corpus(dir, synthesize_corpus(opts));
  std::cout << fmt::format("wrote {} signals per set to {}\n", per_set, dir);
  return kOk;
}

void add_config_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("config", args.config, "Run configuration (JSON)")->required();
  cmd->add_option("--seed", args.seed, "Master seed");
  cmd->add_option("--jobs,-j", args.jobs, "Worker threads");
  cmd->add_option("--profile", args.profile, "custom or reproduction");
  cmd->add_option("--output,-o", args.output, "Output directory");
  cmd->add_option("--corpus", args.corpus,
                  fmt::format("Corpus root (overrides {} and the config)", kCorpusRootEnv));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seizure-detection feature and classifier benchmark on the Bonn EEG corpus"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunArgs args;
  auto* run = app.add_subcommand("run", "Run every configured cell and write the report bundle");
  add_config_options(run, args);
  run->add_flag("--quiet,-q", args.quiet, "No per-cell progress");

  auto* validate_cmd = app.add_subcommand("validate", "Check a config and print it normalized");
  add_config_options(validate_cmd, args);

  std::string extractor = "db4";
  std::string scheme = "imbalanced";
  std::string features_out;
  auto* features = app.add_subcommand("features", "Dump one feature matrix as CSV");
  add_config_options(features, args);
  features->add_option("--extractor,-e", extractor, "wfe, db2, db4, coif1 or mfcc");
  features->add_option("--scheme,-s", scheme, "imbalanced or balanced");
  features->add_option("--out", features_out, "Output CSV (default stdout)");

  std::string csv_path;
  std::string stats_scheme;
  std::string stats_out;
  double alpha = 0.05;
  auto* stats = app.add_subcommand("stats", "ANOVA, omega squared and Tukey HSD from a cells CSV");
  stats->add_option("csv", csv_path, "Long-format cells CSV")->required();
  stats->add_option("--scheme,-s", stats_scheme, "Only this scheme");
  stats->add_option("--out,-o", stats_out, "Also write CSV tables into this directory");
  stats->add_option("--alpha", alpha, "Family-wise error rate")->check(CLI::Range(0.0, 1.0));

  std::string synth_dir;
  std::size_t per_set = kBonnSignalsPerSet;
  std::size_t samples = kBonnSamples;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus in the Bonn layout");
  synth->add_option("dir", synth_dir, "Destination directory")->required();
  synth->add_option("--per-set", per_set, "Signals per set")->check(CLI::PositiveNumber);
  synth->add_option("--samples", samples, "Samples per signal")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(args);
    if (*validate_cmd) return cmd_validate(args);
    if (*features) return cmd_features(args, extractor, scheme, features_out);
    if (*stats) return cmd_stats(csv_path, stats_scheme, stats_out, alpha);
    if (*synth) return cmd_synth(synth_dir, per_set, samples, synth_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const CellError& e) {
    std::cerr << "cell failure: " << e.what() << '\n';
    return kCell;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCell;
  }
  return kOk;
}
