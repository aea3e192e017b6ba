// hdmole: hyperdimensional classifier for molecular property prediction.
//
// Subcommands:
//   run           train + evaluate one experiment, write a JSON report
//   grid          run a list of experiments from a JSON config file
//   train-vocab   train a tokenizer vocabulary from a dataset CSV
//   predict       classify a single SMILES with a saved model
//   export-split  write a train/test split manifest as JSON
//
// Exit codes: 0 success, 2 configuration error, 3 data error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hdmole/error.hpp"
#include "hdmole/experiment.hpp"
#include "hdmole/metrics.hpp"
#include "hdmole/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct CommonDatasetArgs {
  std::string dataset;
  std::string smiles_col;
  std::vector<std::string> label_cols;
};

void add_dataset_options(CLI::App& cmd, CommonDatasetArgs& args,
                         bool labels_required) {
  cmd.add_option("--dataset", args.dataset, "Dataset CSV path")->required();
  cmd.add_option("--smiles-col", args.smiles_col, "SMILES column name")
      ->required();
  auto* labels = cmd.add_option("--label-cols", args.label_cols,
                                "Comma-separated label column names")
                     ->delimiter(',');
  if (labels_required) labels->required();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hdmole::IoError("cannot write output file: " + path);
  out << text;
  if (!out) throw hdmole::IoError("failed writing output file: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperdimensional molecular property classifier"};
  app.set_version_flag("--version",
                       std::string(hdmole::kToolkitName) + " " + hdmole::kVersion);
  app.require_subcommand(1);

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  CommonDatasetArgs run_args;
  add_dataset_options(*run_cmd, run_args, true);
  std::string tokenizer = "pe";
  int gram = 1;
  std::string split = "random";
  std::size_t dim = 10000;
  std::uint32_t vocab_size = 1500;
  std::uint32_t merges = 3000;
  std::size_t epochs = 20;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
  double frac = 0.8;
  std::string out_path;
  std::string save_model_path;
  std::optional<std::uint64_t> shuffle_epochs;
  bool summary = false;
  run_cmd->add_option("--tokenizer", tokenizer, "char|pe")
      ->check(CLI::IsMember({"char", "pe"}));
  run_cmd->add_option("--gram", gram, "Gram size 1|2|3")
      ->check(CLI::Range(1, 3));
  run_cmd->add_option("--split", split, "random|stratified|scaffold")
      ->check(CLI::IsMember({"random", "stratified", "scaffold"}));
  run_cmd->add_option("--dim", dim, "Hypervector dimension");
  run_cmd->add_option("--vocab-size", vocab_size, "Vocabulary cap m");
  run_cmd->add_option("--merges", merges, "Pair-encoding merge budget");
  run_cmd->add_option("--epochs", epochs, "Retraining epoch cap");
  run_cmd->add_option("--repeats", repeats, "Number of repeated runs");
  run_cmd->add_option("--seed", seed, "Base seed");
  run_cmd->add_option("--frac", frac, "Train fraction");
  run_cmd->add_option("--out", out_path, "Report JSON output path");
  run_cmd->add_option("--save-model", save_model_path,
                      "Save the last run's first-task model here");
  run_cmd->add_option("--shuffle-epochs", shuffle_epochs,
                      "Shuffle retraining order per epoch with this seed");
  run_cmd->add_flag("--summary", summary, "Print an aligned score table");

  // --- grid ---
  auto* grid_cmd = app.add_subcommand("grid", "Run a grid of experiments");
  std::string grid_config;
  std::string grid_out;
  grid_cmd->add_option("--config", grid_config, "JSON config (object or array)")
      ->required();
  grid_cmd->add_option("--out", grid_out, "Combined report output path");

  // --- train-vocab ---
  auto* vocab_cmd = app.add_subcommand("train-vocab", "Train a vocabulary");
  CommonDatasetArgs vocab_args;
  add_dataset_options(*vocab_cmd, vocab_args, false);
  std::string vocab_tokenizer = "pe";
  std::uint32_t vocab_merges = 3000;
  std::uint32_t vocab_cap = 1500;
  std::string vocab_out;
  vocab_cmd->add_option("--tokenizer", vocab_tokenizer, "char|pe")
      ->check(CLI::IsMember({"char", "pe"}));
  vocab_cmd->add_option("--merges", vocab_merges, "Pair-encoding merge budget");
  vocab_cmd->add_option("--vocab-size", vocab_cap, "Vocabulary cap m");
  vocab_cmd->add_option("--out", vocab_out, "output vocabulary file")->required();

  // --- predict ---
  auto* predict_cmd =
      app.add_subcommand("predict", "Classify one SMILES with a saved model");
  std::string model_path;
  std::string predict_smiles;
  std::string vocab_override;
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--smiles", predict_smiles, "SMILES string")
      ->required();
  predict_cmd->add_option("--vocab", vocab_override,
                          "Vocabulary file (defaults to the path in the model)");

  // --- export-split ---
  auto* split_cmd =
      app.add_subcommand("export-split", "Write a split manifest as JSON");
  CommonDatasetArgs split_args;
  add_dataset_options(*split_cmd, split_args, false);
  std::string split_kind = "random";
  double split_frac = 0.8;
  std::uint64_t split_seed = 0;
  std::string split_out;
  split_cmd->add_option("--split", split_kind, "random|stratified|scaffold")
      ->check(CLI::IsMember({"random", "stratified", "scaffold"}));
  split_cmd->add_option("--frac", split_frac, "Train fraction");
  split_cmd->add_option("--seed", split_seed, "Split seed");
  split_cmd->add_option("--out", split_out, "Manifest output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      hdmole::ExperimentConfig config;
      config.dataset_path = run_args.dataset;
      config.smiles_column = run_args.smiles_col;
      config.label_columns = run_args.label_cols;
      config.tokenizer = hdmole::token_scheme_from_string(tokenizer);
      config.gram = hdmole::gram_from_int(gram);
      config.split = hdmole::split_kind_from_string(split);
      config.dim = dim;
      config.vocab_cap = vocab_size;
      config.num_merges = merges;
      config.epochs = epochs;
      config.repeats = repeats;
      config.base_seed = hdmole::Seed{seed};
      config.train_fraction = frac;
      if (shuffle_epochs) config.shuffle_epochs = hdmole::Seed{*shuffle_epochs};
      if (!save_model_path.empty()) config.save_model_path = save_model_path;

      const hdmole::RunReport report = hdmole::run_experiment(config);
      const std::string json = hdmole::report_to_json(report);
      if (!out_path.empty()) {
        write_text_file(out_path, json);
      } else {
        std::cout << json;
      }
      if (summary) std::cout << hdmole::report_summary(report);
    } else if (grid_cmd->parsed()) {
      const auto configs = hdmole::configs_from_json_file(grid_config);
      const auto entries = hdmole::run_grid(configs);
      const std::string json = hdmole::grid_to_json(entries);
      if (!grid_out.empty()) {
        write_text_file(grid_out, json);
      } else {
        std::cout << json;
      }
    } else if (vocab_cmd->parsed()) {
      const hdmole::Dataset ds = hdmole::load_csv(
          vocab_args.dataset, vocab_args.smiles_col, vocab_args.label_cols);
      std::vector<std::string> corpus;
      corpus.reserve(ds.samples.size());
      for (const auto& sample : ds.samples) corpus.push_back(sample.smiles);
      std::vector<hdmole::MergeRule> rules;
      hdmole::Vocabulary vocab;
      if (hdmole::token_scheme_from_string(vocab_tokenizer) ==
          hdmole::TokenScheme::kChar) {
        vocab = hdmole::build_char_vocab(corpus, vocab_cap);
      } else {
        rules = hdmole::pe_train(corpus, vocab_merges);
        vocab = hdmole::build_vocab(corpus, rules, vocab_cap);
      }
      hdmole::save_vocabulary(vocab_out, vocab, rules);
      std::cout << "wrote " << vocab.size() << " tokens and " << rules.size()
                << " merge rules to " << vocab_out << "\n";
    } else if (predict_cmd->parsed()) {
      const auto [am, info] = hdmole::load_model(model_path);
      const std::string vocab_path =
          vocab_override.empty() ? info.vocab_path : vocab_override;
      const auto [vocab, rules] = hdmole::load_vocabulary(vocab_path);
      const hdmole::ItemMemory im =
          hdmole::build_item_memory(info.m, info.dim, info.im_seed);
      const hdmole::TokenSequence tokens =
          hdmole::encode_tokens(predict_smiles, vocab, rules);
      const hdmole::Hypervector query =
          hdmole::encode_sample_auto(tokens, im, info.gram);
      const hdmole::Inference inf = hdmole::infer(am, query);
      const double eta =
          hdmole::confidence(inf.similarities[1], inf.similarities[0]);
      std::cout << "{\"class\":" << inf.predicted_class
                << ",\"confidence\":" << eta << "}\n";
    } else if (split_cmd->parsed()) {
      const auto kind = hdmole::split_kind_from_string(split_kind);
      if (kind == hdmole::SplitKind::kStratified && split_args.label_cols.empty()) {
        throw hdmole::ConfigError(
            "stratified export-split needs --label-cols (first one is used)");
      }
      hdmole::Dataset ds = hdmole::load_csv(
          split_args.dataset, split_args.smiles_col, split_args.label_cols);
      hdmole::SanitizedDataset data = hdmole::sanitize_dataset(
          std::move(ds), kind == hdmole::SplitKind::kScaffold);
      const hdmole::Split result =
          hdmole::make_split(data, kind, split_frac, hdmole::Seed{split_seed});
      write_text_file(split_out, hdmole::split_to_json(result) + "\n");
      std::cout << "train " << result.train.size() << " / test "
                << result.test.size() << " (dropped "
                << data.dropped_unparseable << " unparseable)\n";
    }
  } catch (const hdmole::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hdmole::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const hdmole::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
