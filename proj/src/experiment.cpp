// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sbench Authors

#include "sbench/experiment.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include <fmt/format.h>
#include <json.hpp>

#include "sbench/error.hpp"
#include "sbench/report.hpp"
#include "sbench/seed.hpp"
#include "sbench/version.hpp"

namespace sbench {

namespace fs = std::filesystem;

std::uint64_t dataset_seed(std::uint64_t master, Scheme scheme) {
  return SeedKey(master).add("dataset").add(to_string(scheme)).value();
}

SplitPlan seeded_plan(const SplitPlan& plan, std::uint64_t master, Scheme scheme) {
  SplitPlan out = plan;
  out.seed = SeedKey(master).add(to_string(scheme)).add(plan.name()).value();
  return out;
}

std::vector<LongRow> ExperimentResult::rows_for(const std::string& plan) const {
  std::vector<CellResult> selected;
  for (const auto& c : cells) {
    if (c.plan == plan) selected.push_back(c);
  }
  return to_long_rows(selected);
}

namespace {

// Runs body(i) for i in [0, n) on up to `jobs` threads.
template <typename Body>
void parallel_for(std::size_t n, int jobs, Body body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Unit {
  std::size_t scheme = 0;
  std::size_t extractor = 0;
  std::size_t plan = 0;
};

}  // namespace

ExperimentResult run_experiment(const RunConfig& config, const Corpus& corpus,
                                const ExperimentOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto plans = config.plans();
  const std::size_t n_schemes = config.schemes.size();
  const std::size_t n_extractors = config.extractors.size();
  const std::size_t n_plans = plans.size();
  const std::size_t n_models = config.models.size();

  ExperimentResult result;
  result.planned = n_schemes * n_extractors * n_plans * n_models;

  std::vector<LabeledDataset> datasets;
  for (Scheme s : config.schemes) {
    datasets.push_back(build_dataset(corpus, s, dataset_seed(config.seed, s)));
  }

  std::vector<Unit> units;
  for (std::size_t s = 0; s < n_schemes; ++s) {
    for (std::size_t e = 0; e < n_extractors; ++e) {
      for (std::size_t p = 0; p < n_plans; ++p) units.push_back({s, e, p});
    }
  }

  std::vector<std::optional<CellResult>> slots(result.planned);
  std::atomic<bool> abort{false};
  std::atomic<std::size_t> done{0};
  std::mutex report_mutex;

  for (std::size_t s = 0; s < n_schemes && !abort; ++s) {
    for (std::size_t e = 0; e < n_extractors && !abort; ++e) {
      const FeatureMatrix features =
          extract_matrix(datasets[s], config.extractors[e], config.features, config.jobs);

      // Within one feature matrix, the (plan, model) cells are the work items;
      // the prepared splits of a plan are built by whichever worker asks first.
      std::vector<std::once_flag> prepared_once(n_plans);
      std::vector<std::vector<PreparedSplit>> prepared(n_plans);
      std::vector<std::string> prepare_error(n_plans);
      const CellContext context{config.schemes[s], config.seed};

      parallel_for(n_plans * n_models, config.jobs, [&](std::size_t item) {
        if (abort) return;
        const std::size_t p = item / n_models;
        const std::size_t m = item % n_models;
        const SplitPlan plan = seeded_plan(plans[p], config.seed, config.schemes[s]);
        std::call_once(prepared_once[p], [&] {
          try {
            prepared[p] = prepare_splits(features, make_splits(features.labels, plan),
                                         config.preprocess);
          } catch (const std::exception& ex) {
            prepare_error[p] = fmt::format("cell {}/{}/{} preprocessing: {}",
                                           to_string(config.schemes[s]),
                                           to_string(config.extractors[e]), plan.name(), ex.what());
          }
        });
        std::optional<std::string> failure;
        std::optional<CellResult> cell;
        if (!prepare_error[p].empty()) {
          failure = prepare_error[p];
        } else {
          try {
            cell = evaluate_model(prepared[p], config.extractors[e], config.models[m],
                                  config.hyperparams, plan, context);
          } catch (const std::exception& ex) {
            failure = ex.what();
          }
        }
        std::lock_guard lock(report_mutex);
        if (failure) {
          if (!result.failure) result.failure = *failure;
          abort = true;
          return;
        }
        const std::size_t slot = ((s * n_extractors + e) * n_plans + p) * n_models + m;
        slots[slot] = std::move(cell);
        ++done;
        if (options.progress) options.progress({done, result.planned, &*slots[slot]});
      });
    }
  }

  for (auto& slot : slots) {
    if (slot) result.cells.push_back(std::move(*slot));
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_config(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  body(out);
  out.flush();
  if (!out) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool stats_possible(const std::vector<LongRow>& rows, const std::string& scheme,
                    std::string& reason) {
  std::map<std::pair<std::string, std::string>, int> per_cell;
  std::set<std::string> models;
  std::set<std::string> extractors;
  for (const auto& r : rows) {
    if (r.scheme != scheme) continue;
    ++per_cell[{r.model, r.extractor}];
    models.insert(r.model);
    extractors.insert(r.extractor);
  }
  if (models.size() < 2 || extractors.size() < 2) {
    reason = "needs at least two models and two extractors";
    return false;
  }
  for (const auto& [key, n] : per_cell) {
    if (n < 2) {
      reason = "needs at least two replications per cell";
      return false;
    }
  }
  return true;
}

}  // namespace

fs::path write_bundle(const RunConfig& config, const ExperimentResult& result) {
  const fs::path target = result.complete()
                              ? config.output_dir
                              : fs::path(config.output_dir.string() + ".partial");
  const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
  fs::create_directories(parent);
  const fs::path tmp =
      parent / fmt::format(".{}.tmp-{}", target.filename().string(), static_cast<long>(::getpid()));
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  nlohmann::ordered_json manifest;
  manifest["tool"] = "sbench";
  manifest["version"] = kVersion;
  manifest["status"] = result.complete() ? "complete" : "failed";
  if (result.failure) manifest["failure"] = *result.failure;
  manifest["config_hash"] = config_hash(config);
  manifest["seed"] = config.seed;
  manifest["profile"] = std::string(to_string(config.profile));
  manifest["written_at"] = utc_now();
  manifest["elapsed_seconds"] = result.elapsed_seconds;
  manifest["cells_planned"] = result.planned;
  manifest["cells_completed"] = result.cells.size();
  manifest["libraries"] = {
      {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                            EIGEN_MINOR_VERSION)},
      {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100,
                          FMT_VERSION % 100)},
      {"fftw", std::string(fftw_version)},
      {"boost", fmt::format("{}.{}.{}", BOOST_VERSION / 100000, BOOST_VERSION / 100 % 1000,
                            BOOST_VERSION % 100)}};

  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"scheme", std::string(to_string(c.scheme))},
                     {"extractor", std::string(to_string(c.extractor))},
                     {"model", to_string(c.model)},
                     {"plan", c.plan},
                     {"replications", c.replications.size()},
                     {"mean_dimensions", c.mean_dimensions},
                     {"model_summary", c.model_summary}});
  }
  manifest["cells"] = cells;

  write_file(tmp / "config.json", [&](std::ostream& out) { out << emit_config(config); });

  auto files = nlohmann::ordered_json::array();
  auto skipped = nlohmann::ordered_json::array();
  const auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& body) {
    write_file(tmp / name, body);
    files.push_back(name);
  };

  for (const auto& plan : config.plans()) {
    const auto rows = result.rows_for(plan.name());
    emit(fmt::format("cells_{}.csv", plan.name()),
         [&](std::ostream& out) { write_long_csv(out, rows); });
    if (rows.empty()) continue;
    const auto table = performance_table(rows);
    emit(fmt::format("performance_{}.csv", plan.name()),
         [&](std::ostream& out) { write_performance_csv(out, table); });
    emit(fmt::format("performance_{}.txt", plan.name()),
         [&](std::ostream& out) { write_performance_text(out, table); });
    for (const auto& scheme : schemes_in(rows)) {
      emit(fmt::format("boxplot_{}_{}.csv", plan.name(), scheme),
           [&](std::ostream& out) { write_boxplot_data(out, rows, scheme); });
      emit(fmt::format("boxplot_summary_{}_{}.csv", plan.name(), scheme),
           [&](std::ostream& out) { write_boxplot_summary(out, rows, scheme); });
    }
  }

  if (result.complete()) {
    const auto rows = result.rows_for(config.stats_plan);
    for (const auto& scheme : schemes_in(rows)) {
      std::string reason;
      if (!stats_possible(rows, scheme, reason)) {
        skipped.push_back({{"scheme", scheme}, {"reason", reason}});
        continue;
      }
      const auto report = analyze_scheme(rows, scheme, config.alpha);
      emit(fmt::format("anova_{}.csv", scheme),
           [&](std::ostream& out) { write_anova_csv(out, report.anova); });
      emit(fmt::format("omega_squared_{}.csv", scheme),
           [&](std::ostream& out) { write_omega_csv(out, report.effects); });
      emit(fmt::format("tukey_models_{}.csv", scheme),
           [&](std::ostream& out) { write_tukey_csv(out, report.tukey_models); });
      emit(fmt::format("tukey_extractors_{}.csv", scheme),
           [&](std::ostream& out) { write_tukey_csv(out, report.tukey_extractors); });
      emit(fmt::format("stats_{}.txt", scheme),
           [&](std::ostream& out) { write_stats_text(out, report); });
    }
  }
  manifest["stats_plan"] = config.stats_plan;
  if (!skipped.empty()) manifest["stats_skipped"] = skipped;
  manifest["files"] = files;
  write_file(tmp / "manifest.json", [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });

  std::error_code ec;
  fs::remove_all(target, ec);
  fs::rename(tmp, target, ec);
  if (ec) {
    throw DataError(fmt::format("cannot move results into '{}': {}", target.string(), ec.message()));
  }
  return target;
}

}  // namespace sbench
