#include "hdmole/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"

#include "hdmole/error.hpp"
#include "hdmole/metrics.hpp"
#include "hdmole/parallel.hpp"
#include "hdmole/version.hpp"

namespace hdmole {

namespace {

using nlohmann::json;

// Fixed offsets keep the split stream and the item-memory stream distinct
// for every run seed; both feed mixers downstream.
constexpr std::uint64_t kSplitSeedOffset = 0x5314'0001ull;
constexpr std::uint64_t kItemMemorySeedOffset = 0x11e3'0002ull;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

std::string_view to_string(SplitKind kind) {
  switch (kind) {
    case SplitKind::kRandom: return "random";
    case SplitKind::kStratified: return "stratified";
    case SplitKind::kScaffold: return "scaffold";
  }
  return "random";
}

SplitKind split_kind_from_string(std::string_view name) {
  if (name == "random") return SplitKind::kRandom;
  if (name == "stratified") return SplitKind::kStratified;
  if (name == "scaffold") return SplitKind::kScaffold;
  throw ConfigError("unknown split method: " + std::string(name));
}

SanitizedDataset sanitize_dataset(Dataset dataset, bool with_scaffolds) {
  SanitizedDataset out;
  const std::size_t n = dataset.samples.size();
  std::vector<ScaffoldKey> keys(n);
  std::vector<char> ok(n, 0);
  parallel_for(0, n, [&](std::size_t i) {
    try {
      const MolGraph g = parse_smiles(dataset.samples[i].smiles);
      if (with_scaffolds) keys[i] = murcko_scaffold(g);
      ok[i] = 1;
    } catch (const MalformedSmilesError&) {
      ok[i] = 0;
    }
  });
  for (std::uint32_t i = 0; i < n; ++i) {
    if (ok[i]) {
      out.kept.push_back(i);
      if (with_scaffolds) out.scaffold_keys.push_back(std::move(keys[i]));
    } else {
      ++out.dropped_unparseable;
    }
  }
  out.dataset = std::move(dataset);
  return out;
}

Split make_split(const SanitizedDataset& data, SplitKind kind, double frac,
                 Seed split_seed) {
  const std::size_t n = data.kept.size();
  switch (kind) {
    case SplitKind::kRandom:
      return split_random(n, frac, split_seed);
    case SplitKind::kStratified: {
      std::vector<std::int8_t> labels;
      labels.reserve(n);
      for (const auto idx : data.kept) {
        const auto& sample_labels = data.dataset.samples[idx].labels;
        const std::int8_t label =
            sample_labels.empty() ? kMissingLabel : sample_labels.front();
        if (label == kMissingLabel) {
          throw DataError(
              "stratified split needs a first-task label for every sample");
        }
        labels.push_back(label);
      }
      return split_stratified(labels, frac, split_seed);
    }
    case SplitKind::kScaffold:
      return split_scaffold(data.scaffold_keys, frac);
  }
  throw ConfigError("unknown split kind");
}

namespace {

void validate(const ExperimentConfig& config) {
  if (config.repeats < 1) throw ConfigError("repeats must be >= 1");
  if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (config.dim < 1) throw ConfigError("dim must be >= 1");
  if (config.vocab_cap < 1) throw ConfigError("vocab size m must be >= 1");
  if (config.label_columns.empty()) {
    throw ConfigError("at least one label column is required");
  }
  if (config.train_fraction <= 0.0 || config.train_fraction >= 1.0) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
}

struct TaskOutcome {
  std::optional<double> auc;
};

void aggregate(TaskAggregate& agg) {
  double sum = 0.0, lo = 2.0, hi = -1.0;
  std::size_t defined = 0;
  for (const auto& auc : agg.auc_per_run) {
    if (!auc) {
      ++agg.undefined_runs;
      continue;
    }
    ++defined;
    sum += *auc;
    lo = std::min(lo, *auc);
    hi = std::max(hi, *auc);
  }
  agg.defined = defined > 0;
  if (agg.defined) {
    agg.mean = sum / static_cast<double>(defined);
    agg.ceiling = hi - agg.mean;
    agg.floor = agg.mean - lo;
  }
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& config) {
  validate(config);
  const double t0 = now_seconds();

  Dataset loaded =
      load_csv(config.dataset_path, config.smiles_column, config.label_columns);
  SanitizedDataset data = sanitize_dataset(
      std::move(loaded), config.split == SplitKind::kScaffold);
  const std::size_t n = data.kept.size();
  if (n < 2) throw TooFewSamplesError("fewer than 2 usable samples");

  const std::size_t num_tasks = config.label_columns.size();
  RunReport report;
  report.config = config;
  report.toolkit = std::string(kToolkitName) + " " + kVersion;
  report.dataset_name = data.dataset.name;
  report.usable_samples = n;
  report.dropped_rows_load = data.dataset.dropped_rows;
  report.dropped_unparseable = data.dropped_unparseable;
  report.tasks.resize(num_tasks);
  for (std::size_t t = 0; t < num_tasks; ++t) {
    report.tasks[t].task = config.label_columns[t];
  }
  report.task_average.task = "task_average";

  for (std::size_t r = 0; r < config.repeats; ++r) {
    const double run_t0 = now_seconds();
    RunRecord record;
    record.run_index = r;
    const std::uint64_t run_seed = config.base_seed.value + r;
    record.run_seed = run_seed;
    const Seed split_seed{run_seed + kSplitSeedOffset};
    const Seed im_seed{run_seed + kItemMemorySeedOffset};

    const Split split =
        make_split(data, config.split, config.train_fraction, split_seed);
    if (split.test.empty()) {
      throw EmptyTestError("split produced an empty test set");
    }
    record.train_size = split.train.size();
    record.test_size = split.test.size();

    // Tokenizer state comes from the training split only.
    std::vector<std::string> train_corpus;
    train_corpus.reserve(split.train.size());
    for (const auto k : split.train) {
      train_corpus.push_back(data.dataset.samples[data.kept[k]].smiles);
    }
    std::vector<MergeRule> rules;
    Vocabulary vocab;
    if (config.tokenizer == TokenScheme::kChar) {
      vocab = build_char_vocab(train_corpus, config.vocab_cap);
    } else {
      rules = pe_train(train_corpus, config.num_merges);
      vocab = build_vocab(train_corpus, rules, config.vocab_cap);
    }

    const ItemMemory im = build_item_memory(vocab.size(), config.dim, im_seed);

    // Encode every kept sample once; all tasks share the encodings.
    std::vector<Hypervector> encoded(n);
    parallel_for(0, n, [&](std::size_t k) {
      const auto& smiles = data.dataset.samples[data.kept[k]].smiles;
      const TokenSequence tokens = encode_tokens(smiles, vocab, rules);
      encoded[k] = encode_sample_auto(tokens, im, config.gram);
    });

    std::vector<TaskOutcome> outcomes(num_tasks);
    std::mutex model_save_mutex;
    parallel_for(0, num_tasks, [&](std::size_t t) {
      std::vector<Hypervector> train_hvs;
      std::vector<std::uint8_t> train_labels;
      for (const auto k : split.train) {
        const std::int8_t label = data.dataset.samples[data.kept[k]].labels[t];
        if (label == kMissingLabel) continue;
        train_hvs.push_back(encoded[k]);
        train_labels.push_back(static_cast<std::uint8_t>(label));
      }
      AssociativeMemory am;
      try {
        am = fit(train_hvs, train_labels, 2, config.epochs,
                 config.shuffle_epochs);
      } catch (const EmptyClassError&) {
        outcomes[t].auc = std::nullopt;  // task undefined for this run
        return;
      }

      std::vector<ScoredPrediction> preds;
      for (const auto k : split.test) {
        const std::int8_t label = data.dataset.samples[data.kept[k]].labels[t];
        if (label == kMissingLabel) continue;
        const Inference inf = infer(am, encoded[k]);
        preds.push_back({confidence(inf.similarities[1], inf.similarities[0]),
                         static_cast<std::uint8_t>(label)});
      }
      try {
        outcomes[t].auc = roc_auc(preds);
      } catch (const UndefinedAucError&) {
        outcomes[t].auc = std::nullopt;
      }

      // Last repeat, first task: optionally persist the trained model.
      if (config.save_model_path && t == 0 && r == config.repeats - 1) {
        std::lock_guard lock(model_save_mutex);
        const auto vocab_path = config.save_model_path->string() + ".vocab";
        save_vocabulary(vocab_path, vocab, rules);
        ModelInfo info;
        info.dim = static_cast<std::uint32_t>(config.dim);
        info.num_classes = 2;
        info.im_seed = im_seed;
        info.m = vocab.size();
        info.gram = config.gram;
        info.scheme = config.tokenizer;
        info.vocab_path = vocab_path;
        save_model(*config.save_model_path, am, info);
      }
    });

    double task_sum = 0.0;
    std::size_t task_defined = 0;
    for (std::size_t t = 0; t < num_tasks; ++t) {
      record.task_auc.push_back(outcomes[t].auc);
      report.tasks[t].auc_per_run.push_back(outcomes[t].auc);
      if (outcomes[t].auc) {
        task_sum += *outcomes[t].auc;
        ++task_defined;
      }
    }
    if (task_defined > 0) {
      record.task_average = task_sum / static_cast<double>(task_defined);
    }
    report.task_average.auc_per_run.push_back(record.task_average);
    record.wall_seconds = now_seconds() - run_t0;
    report.runs.push_back(std::move(record));
  }

  for (auto& task : report.tasks) aggregate(task);
  aggregate(report.task_average);
  report.total_wall_seconds = now_seconds() - t0;
  return report;
}

std::vector<GridEntry> run_grid(std::span<const ExperimentConfig> configs) {
  std::vector<GridEntry> entries;
  entries.reserve(configs.size());
  for (const auto& config : configs) {
    GridEntry entry;
    try {
      entry.report = run_experiment(config);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["dataset"] = c.dataset_path.string();
  j["smiles_col"] = c.smiles_column;
  j["label_cols"] = c.label_columns;
  j["tokenizer"] = std::string(to_string(c.tokenizer));
  j["gram"] = static_cast<int>(c.gram);
  j["split"] = std::string(to_string(c.split));
  j["dim"] = c.dim;
  j["vocab_size"] = c.vocab_cap;
  j["merges"] = c.num_merges;
  j["epochs"] = c.epochs;
  j["repeats"] = c.repeats;
  j["seed"] = c.base_seed.value;
  j["frac"] = c.train_fraction;
  if (c.shuffle_epochs) j["shuffle_epochs"] = c.shuffle_epochs->value;
  if (c.save_model_path) j["save_model"] = c.save_model_path->string();
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (!j.contains("dataset") || !j.contains("smiles_col") ||
      !j.contains("label_cols")) {
    throw ConfigError(
        "grid config needs dataset, smiles_col, and label_cols fields");
  }
  c.dataset_path = j.at("dataset").get<std::string>();
  c.smiles_column = j.at("smiles_col").get<std::string>();
  c.label_columns = j.at("label_cols").get<std::vector<std::string>>();
  if (j.contains("tokenizer")) {
    c.tokenizer = token_scheme_from_string(j.at("tokenizer").get<std::string>());
  }
  if (j.contains("gram")) c.gram = gram_from_int(j.at("gram").get<int>());
  if (j.contains("split")) {
    c.split = split_kind_from_string(j.at("split").get<std::string>());
  }
  if (j.contains("dim")) c.dim = j.at("dim").get<std::size_t>();
  if (j.contains("vocab_size")) c.vocab_cap = j.at("vocab_size").get<std::uint32_t>();
  if (j.contains("merges")) c.num_merges = j.at("merges").get<std::uint32_t>();
  if (j.contains("epochs")) c.epochs = j.at("epochs").get<std::size_t>();
  if (j.contains("repeats")) c.repeats = j.at("repeats").get<std::size_t>();
  if (j.contains("seed")) c.base_seed.value = j.at("seed").get<std::uint64_t>();
  if (j.contains("frac")) c.train_fraction = j.at("frac").get<double>();
  if (j.contains("shuffle_epochs")) {
    c.shuffle_epochs = Seed{j.at("shuffle_epochs").get<std::uint64_t>()};
  }
  if (j.contains("save_model")) {
    c.save_model_path = j.at("save_model").get<std::string>();
  }
  return c;
}

json aggregate_to_json(const TaskAggregate& agg) {
  json j;
  j["task"] = agg.task;
  j["defined"] = agg.defined;
  j["undefined_runs"] = agg.undefined_runs;
  if (agg.defined) {
    j["mean"] = agg.mean;
    j["ceiling"] = agg.ceiling;
    j["floor"] = agg.floor;
  }
  json per_run = json::array();
  for (const auto& auc : agg.auc_per_run) {
    if (auc) {
      per_run.push_back(*auc);
    } else {
      per_run.push_back(nullptr);
    }
  }
  j["auc_per_run"] = std::move(per_run);
  return j;
}

json report_to_json_value(const RunReport& report) {
  json j;
  j["toolkit"] = report.toolkit;
  j["config"] = config_to_json(report.config);
  j["dataset"] = report.dataset_name;
  j["usable_samples"] = report.usable_samples;
  j["dropped_rows_load"] = report.dropped_rows_load;
  j["dropped_unparseable_smiles"] = report.dropped_unparseable;
  json runs = json::array();
  for (const auto& run : report.runs) {
    json rj;
    rj["run"] = run.run_index;
    rj["seed"] = run.run_seed;
    rj["train_size"] = run.train_size;
    rj["test_size"] = run.test_size;
    json aucs = json::array();
    for (const auto& auc : run.task_auc) {
      if (auc) {
        aucs.push_back(*auc);
      } else {
        aucs.push_back(nullptr);
      }
    }
    rj["task_auc"] = std::move(aucs);
    if (run.task_average) rj["task_average"] = *run.task_average;
    rj["wall_seconds"] = run.wall_seconds;
    runs.push_back(std::move(rj));
  }
  j["runs"] = std::move(runs);
  json tasks = json::array();
  for (const auto& task : report.tasks) tasks.push_back(aggregate_to_json(task));
  j["tasks"] = std::move(tasks);
  j["task_average"] = aggregate_to_json(report.task_average);
  j["total_wall_seconds"] = report.total_wall_seconds;
  return j;
}

}  // namespace

std::string report_to_json(const RunReport& report, int indent) {
  return report_to_json_value(report).dump(indent) + "\n";
}

std::string grid_to_json(std::span<const GridEntry> entries, int indent) {
  json j = json::array();
  for (const auto& entry : entries) {
    json e;
    if (entry.report) {
      e["report"] = report_to_json_value(*entry.report);
    } else {
      e["error"] = entry.error;
    }
    j.push_back(std::move(e));
  }
  return j.dump(indent) + "\n";
}

std::vector<ExperimentConfig> configs_from_json_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("grid config is not valid JSON: " + std::string(e.what()));
  }
  std::vector<ExperimentConfig> configs;
  if (j.is_array()) {
    for (const auto& item : j) configs.push_back(config_from_json(item));
  } else {
    configs.push_back(config_from_json(j));
  }
  return configs;
}

std::string report_summary(const RunReport& report) {
  std::ostringstream out;
  out << report.dataset_name << "  tokenizer=" << to_string(report.config.tokenizer)
      << "  gram=" << static_cast<int>(report.config.gram)
      << "  split=" << to_string(report.config.split)
      << "  repeats=" << report.config.repeats << "\n";
  const auto line = [&out](const TaskAggregate& agg) {
    out << "  " << agg.task;
    for (std::size_t pad = agg.task.size(); pad < 28; ++pad) out << ' ';
    if (agg.defined) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.3f  +%.3f / -%.3f", agg.mean,
                    agg.ceiling, agg.floor);
      out << buf;
      if (agg.undefined_runs > 0) {
        out << "  (" << agg.undefined_runs << " undefined run(s))";
      }
    } else {
      out << "undefined (single-class)";
    }
    out << "\n";
  };
  for (const auto& task : report.tasks) line(task);
  if (report.tasks.size() > 1) line(report.task_average);
  return out.str();
}

}  // namespace hdmole
