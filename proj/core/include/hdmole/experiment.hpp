#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdmole/data.hpp"
#include "hdmole/model.hpp"
#include "hdmole/rng.hpp"
#include "hdmole/tokenizer.hpp"

namespace hdmole {

enum class SplitKind : std::uint8_t { kRandom, kStratified, kScaffold };

std::string_view to_string(SplitKind kind);
SplitKind split_kind_from_string(std::string_view name);

/// Declarative description of one experiment: dataset x tokenizer x gram x
/// split, run `repeats` times with derived seeds.
struct ExperimentConfig {
  std::filesystem::path dataset_path;
  std::string smiles_column;
  std::vector<std::string> label_columns;
  TokenScheme tokenizer = TokenScheme::kPairEncoding;
  Gram gram = Gram::kUnigram;
  SplitKind split = SplitKind::kRandom;
  std::size_t dim = 10000;
  std::uint32_t vocab_cap = 1500;   // m
  std::uint32_t num_merges = 3000;  // pair-encoding training budget
  std::size_t epochs = 20;
  std::size_t repeats = 5;
  Seed base_seed{0};
  double train_fraction = 0.8;
  std::optional<Seed> shuffle_epochs;  // off: fixed retrain order
  std::optional<std::filesystem::path> save_model_path;
};

/// Per-task score statistics over the repeated runs. Ceiling and floor are
/// max-mean and mean-min, the error-bar halves of the score grid.
struct TaskAggregate {
  std::string task;
  std::vector<std::optional<double>> auc_per_run;  // nullopt: undefined AUC
  std::size_t undefined_runs = 0;
  double mean = 0.0;
  double ceiling = 0.0;
  double floor = 0.0;
  bool defined = false;  // at least one run produced an AUC
};

struct RunRecord {
  std::size_t run_index = 0;
  std::uint64_t run_seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<std::optional<double>> task_auc;
  std::optional<double> task_average;
  double wall_seconds = 0.0;
};

struct RunReport {
  ExperimentConfig config;
  std::string toolkit;
  std::string dataset_name;
  std::size_t usable_samples = 0;
  std::size_t dropped_rows_load = 0;        // dropped while reading the CSV
  std::size_t dropped_unparseable = 0;      // SMILES the parser rejected
  std::vector<RunRecord> runs;
  std::vector<TaskAggregate> tasks;
  TaskAggregate task_average;  // aggregate of the per-run task averages
  double total_wall_seconds = 0.0;
};

/// Dataset after SMILES sanitization: rows whose SMILES fail to parse are
/// excluded (and counted) so every split method sees the same sample set.
struct SanitizedDataset {
  Dataset dataset;
  std::vector<std::uint32_t> kept;     // indices into dataset.samples
  std::size_t dropped_unparseable = 0;
  std::vector<ScaffoldKey> scaffold_keys;  // per kept sample (scaffold splits)
};

SanitizedDataset sanitize_dataset(Dataset dataset, bool with_scaffolds);

/// Split over the sanitized sample list (indices into `kept` order).
/// Stratified splits stratify on the first task's labels.
Split make_split(const SanitizedDataset& data, SplitKind kind, double frac,
                 Seed split_seed);

/// Runs the full pipeline: split, train tokenizer on the training split,
/// build item memory, encode, fit, score the test split with confidence
/// levels, and aggregate mean/ceiling/floor per task across repeats.
RunReport run_experiment(const ExperimentConfig& config);

/// One grid entry per config; failures are isolated, not fatal.
struct GridEntry {
  std::optional<RunReport> report;
  std::string error;  // empty on success
};

std::vector<GridEntry> run_grid(std::span<const ExperimentConfig> configs);

// --- JSON interfaces (report files and grid config files) ---

std::string report_to_json(const RunReport& report, int indent = 2);
std::string grid_to_json(std::span<const GridEntry> entries, int indent = 2);

/// Parses one config object or an array of them.
std::vector<ExperimentConfig> configs_from_json_file(
    const std::filesystem::path& path);

/// Aligned-text score summary (mean with ceiling/floor per task).
std::string report_summary(const RunReport& report);

}  // namespace hdmole
