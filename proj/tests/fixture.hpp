#pragma once

// Synthetic two-family molecule CSV used by the pipeline tests. Both classes
// draw the same ring cores (or none), so scaffold groups mix classes and a
// scaffold split keeps both labels on both sides; the class signal lives in
// the decoration alphabet (amine chains vs ether/thioether chains), which
// both tokenizer schemes can pick up.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hdmole/rng.hpp"

namespace fixture {

inline const std::vector<std::string>& ring_cores() {
  static const std::vector<std::string> cores{
      "c1ccccc1",        "c1ccncc1",      "c1ccsc1",      "C1CCCCC1",
      "c1ccc2ccccc2c1",  "C1CCNCC1",      "C1CCOC1",      "c1cc[nH]c1",
      "C1CC1",           "C1CCCC1",       "c1ccoc1",      "C1CCNC1",
  };
  return cores;
}

inline const std::vector<std::string>& amine_chains() {
  static const std::vector<std::string> parts{"CN",  "CCN", "NC",
                                              "CNC", "N",   "CCNC"};
  return parts;
}

inline const std::vector<std::string>& ether_chains() {
  static const std::vector<std::string> parts{"CO",  "CCO", "OC",
                                              "COC", "O",   "CCS"};
  return parts;
}

struct Row {
  std::string smiles;
  int family = 0;       // task 0: decoration chemistry
  int has_halogen = 0;  // task 1: chlorine tail present
};

inline std::vector<Row> make_rows(std::size_t count, hdmole::Seed seed) {
  hdmole::SplitMix64 gen(seed);
  std::vector<Row> rows;
  rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Row row;
    row.family = static_cast<int>(i % 2);
    const auto& pool = row.family ? amine_chains() : ether_chains();
    std::string smiles = pool[gen.next_below(pool.size())];
    if (gen.next_below(3) != 0) {  // two thirds carry a ring core
      smiles += ring_cores()[gen.next_below(ring_cores().size())];
    }
    smiles += pool[gen.next_below(pool.size())];
    if (gen.next_below(3) == 0) {
      smiles += "CCl";
      row.has_halogen = 1;
    }
    row.smiles = std::move(smiles);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Writes the fixture CSV; `broken_rows` appends rows with unparseable
/// SMILES to exercise sanitization counters.
inline std::filesystem::path write_csv(const std::filesystem::path& path,
                                       std::size_t count, hdmole::Seed seed,
                                       std::size_t broken_rows = 0) {
  std::ofstream out(path, std::ios::binary);
  out << "smiles,family,halogen\n";
  for (const auto& row : make_rows(count, seed)) {
    out << row.smiles << ',' << row.family << ',' << row.has_halogen << '\n';
  }
  for (std::size_t i = 0; i < broken_rows; ++i) {
    out << "C(C1CC,0,0\n";
  }
  return path;
}

}  // namespace fixture
