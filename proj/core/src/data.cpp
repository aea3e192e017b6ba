#include "hdmole/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "hdmole/error.hpp"

namespace hdmole {

namespace {

/// One CSV record; handles quoted fields, "" escapes, commas and newlines
/// inside quotes, and CRLF endings. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int c;
  while ((c = in.get()) != EOF) {
    any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  fields.push_back(std::move(field));
  return true;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

/// "0"/"1" (also "0.0"/"1.0" style) -> label; "" -> missing; else nullopt.
std::optional<std::int8_t> parse_label(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) return kMissingLabel;
  try {
    std::size_t pos = 0;
    const double num = std::stod(v, &pos);
    if (pos != v.size()) return std::nullopt;
    if (num == 0.0) return 0;
    if (num == 1.0) return 1;
    return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path,
                 const std::string& smiles_column,
                 const std::vector<std::string>& label_columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path.string());

  std::vector<std::string> header;
  if (!read_record(in, header)) {
    throw SchemaError("dataset file has no header row: " + path.string());
  }
  const auto column_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return i;
    }
    throw SchemaError("column not found in " + path.string() + ": " + name);
  };

  const std::size_t smiles_idx = column_index(smiles_column);
  std::vector<std::size_t> label_idx;
  label_idx.reserve(label_columns.size());
  for (const auto& name : label_columns) label_idx.push_back(column_index(name));

  Dataset ds;
  ds.name = path.stem().string();
  ds.task_names = label_columns;

  std::vector<std::string> fields;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
    if (fields.size() < header.size()) {
      ++ds.dropped_rows;
      continue;
    }
    Sample sample;
    sample.smiles = trim(fields[smiles_idx]);
    if (sample.smiles.empty()) {
      ++ds.dropped_rows;
      continue;
    }
    sample.labels.reserve(label_idx.size());
    bool bad = false;
    bool any_present = false;
    for (const auto idx : label_idx) {
      const auto label = parse_label(fields[idx]);
      if (!label) {
        bad = true;
        break;
      }
      if (*label != kMissingLabel) any_present = true;
      sample.labels.push_back(*label);
    }
    if (bad || (!label_idx.empty() && !any_present)) {
      ++ds.dropped_rows;
      continue;
    }
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

namespace {

std::size_t train_count(std::size_t n, double frac) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n)));
}

void sort_split(Split& split) {
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
}

}  // namespace

Split split_random(std::size_t n, double frac, Seed seed) {
  if (n < 2) throw TooFewSamplesError("split_random: need at least 2 samples");
  if (frac <= 0.0 || frac >= 1.0) {
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  SplitMix64 gen(seed);
  deterministic_shuffle(order, gen);
  const std::size_t k = train_count(n, frac);
  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
  sort_split(split);
  return split;
}

Split split_stratified(std::span<const std::int8_t> labels, double frac,
                       Seed seed) {
  if (frac <= 0.0 || frac >= 1.0) {
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  }
  std::vector<std::uint32_t> pos, neg;
  for (std::uint32_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      pos.push_back(i);
    } else if (labels[i] == 0) {
      neg.push_back(i);
    } else {
      throw ConfigError("split_stratified: labels must be 0 or 1");
    }
  }
  if (pos.empty() || neg.empty()) {
    throw DegenerateStratificationError(
        "split_stratified: both classes must be present");
  }

  SplitMix64 gen(seed);
  Split split;
  for (auto* cls : {&neg, &pos}) {
    deterministic_shuffle(*cls, gen);
    std::size_t k = train_count(cls->size(), frac);
    // Tiny classes: a lone member goes to train; >=2 members give train >=1
    // (frac < 1 already keeps floor(frac * count) below count).
    if (k == 0) k = 1;
    split.train.insert(split.train.end(), cls->begin(),
                       cls->begin() + static_cast<std::ptrdiff_t>(k));
    split.test.insert(split.test.end(),
                      cls->begin() + static_cast<std::ptrdiff_t>(k), cls->end());
  }
  sort_split(split);
  return split;
}

Split split_scaffold(std::span<const ScaffoldKey> keys, double frac) {
  if (frac <= 0.0 || frac >= 1.0) {
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  }
  // Group by key; every acyclic molecule (empty key) is its own group so a
  // shared "no scaffold" bucket cannot swallow one side of the split.
  std::map<std::string, std::vector<std::uint32_t>> groups;
  std::vector<std::vector<std::uint32_t>> singletons;
  for (std::uint32_t i = 0; i < keys.size(); ++i) {
    if (keys[i].empty()) {
      singletons.push_back({i});
    } else {
      groups[keys[i]].push_back(i);
    }
  }

  struct Group {
    std::vector<std::uint32_t> members;
    const std::string* key;
  };
  static const std::string kEmptyKey;
  std::vector<Group> ordered;
  ordered.reserve(groups.size() + singletons.size());
  for (auto& [key, members] : groups) ordered.push_back({std::move(members), &key});
  for (auto& s : singletons) ordered.push_back({std::move(s), &kEmptyKey});
  std::sort(ordered.begin(), ordered.end(), [](const Group& a, const Group& b) {
    if (a.members.size() != b.members.size()) {
      return a.members.size() > b.members.size();
    }
    if (*a.key != *b.key) return *a.key < *b.key;
    return a.members.front() < b.members.front();
  });

  const std::size_t target = train_count(keys.size(), frac);
  Split split;
  for (const auto& group : ordered) {
    auto& side = (split.train.size() < target) ? split.train : split.test;
    side.insert(side.end(), group.members.begin(), group.members.end());
  }
  sort_split(split);
  return split;
}

std::string split_to_json(const Split& split) {
  std::ostringstream out;
  const auto emit = [&out](const std::vector<std::uint32_t>& v) {
    out << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out << ',';
      out << v[i];
    }
    out << ']';
  };
  out << "{\"train\":";
  emit(split.train);
  out << ",\"test\":";
  emit(split.test);
  out << '}';
  return out.str();
}

}  // namespace hdmole
