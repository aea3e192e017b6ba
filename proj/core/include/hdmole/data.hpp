#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hdmole/rng.hpp"
#include "hdmole/smiles.hpp"

namespace hdmole {

/// Missing task label (multi-task files may leave cells blank).
inline constexpr std::int8_t kMissingLabel = -1;

struct Sample {
  std::string smiles;
  std::vector<std::int8_t> labels;  // 0, 1, or kMissingLabel per task
};

struct Dataset {
  std::string name;
  std::vector<std::string> task_names;
  std::vector<Sample> samples;
  std::size_t dropped_rows = 0;  // rows removed at load (bad labels / empty SMILES)
};

/// Loads an RFC-4180-style CSV (quoted fields, UTF-8, header required).
/// Rows with unparseable labels or an empty SMILES cell are dropped and
/// counted. Missing file -> IoError; missing column -> SchemaError.
Dataset load_csv(const std::filesystem::path& path,
                 const std::string& smiles_column,
                 const std::vector<std::string>& label_columns);

struct Split {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> test;
};

/// Deterministic shuffle by seed; train size = floor(frac * n).
Split split_random(std::size_t n, double frac, Seed seed);

/// Per-class deterministic shuffle, floor(frac * count) of each class to
/// train. A class with a single member goes entirely to train; a class with
/// two or more members always contributes at least one train sample.
Split split_stratified(std::span<const std::int8_t> labels, double frac,
                       Seed seed);

/// Groups samples by scaffold key (each empty key is its own singleton
/// group), sorts groups by (size desc, key asc), and greedily fills train
/// until it reaches floor(frac * n). Deterministic; no seed.
Split split_scaffold(std::span<const ScaffoldKey> keys, double frac);

/// Split manifest as a JSON string: {"train":[...],"test":[...]}.
std::string split_to_json(const Split& split);

}  // namespace hdmole
