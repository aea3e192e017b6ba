#include "hdmole/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "hdmole/error.hpp"

namespace hdmole {

std::string_view to_string(TokenScheme scheme) {
  return scheme == TokenScheme::kChar ? "char" : "pe";
}

TokenScheme token_scheme_from_string(std::string_view name) {
  if (name == "char") return TokenScheme::kChar;
  if (name == "pe") return TokenScheme::kPairEncoding;
  throw ConfigError("unknown tokenizer scheme: " + std::string(name));
}

Vocabulary::Vocabulary(TokenScheme scheme, std::uint32_t cap)
    : scheme_(scheme), cap_(cap) {
  if (cap == 0) throw ConfigError("vocabulary cap m must be >= 1");
}

TokenId Vocabulary::id_of(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? 0 : it->second;
}

void Vocabulary::insert(std::string token) {
  if (ids_.size() >= cap_) return;
  const TokenId next = static_cast<TokenId>(ids_.size() + 1);
  ids_.emplace(std::move(token), next);
}

std::vector<std::pair<std::string, TokenId>> Vocabulary::entries_by_id() const {
  std::vector<std::pair<std::string, TokenId>> out(ids_.begin(), ids_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

std::vector<std::string> char_tokenize(std::string_view smiles) {
  if (smiles.empty()) throw EmptyInputError("char_tokenize: empty SMILES");
  std::vector<std::string> tokens;
  tokens.reserve(smiles.size());
  for (const char c : smiles) tokens.emplace_back(1, c);
  return tokens;
}

std::vector<std::string> atom_tokenize(std::string_view smiles) {
  if (smiles.empty()) throw EmptyInputError("atom_tokenize: empty SMILES");
  std::vector<std::string> tokens;
  tokens.reserve(smiles.size());
  std::size_t i = 0;
  while (i < smiles.size()) {
    const char c = smiles[i];
    if (c == '[') {
      const std::size_t close = smiles.find(']', i);
      if (close == std::string_view::npos) {
        throw MalformedSmilesError("unclosed bracket atom", i);
      }
      tokens.emplace_back(smiles.substr(i, close - i + 1));
      i = close + 1;
    } else if (c == '%') {
      if (i + 2 >= smiles.size() || !std::isdigit(static_cast<unsigned char>(smiles[i + 1])) ||
          !std::isdigit(static_cast<unsigned char>(smiles[i + 2]))) {
        throw MalformedSmilesError("'%' ring closure needs two digits", i);
      }
      tokens.emplace_back(smiles.substr(i, 3));
      i += 3;
    } else if ((c == 'C' || c == 'B') && i + 1 < smiles.size() &&
               ((c == 'C' && smiles[i + 1] == 'l') ||
                (c == 'B' && smiles[i + 1] == 'r'))) {
      tokens.emplace_back(smiles.substr(i, 2));
      i += 2;
    } else {
      tokens.emplace_back(1, c);
      ++i;
    }
  }
  return tokens;
}

namespace {

// Interned-token view of the corpus used during pair-encoding training.
struct TrainState {
  std::vector<std::string> names;                 // id -> surface string
  std::unordered_map<std::string, std::uint32_t> by_name;
  std::vector<std::vector<std::uint32_t>> seqs;

  std::uint32_t intern(const std::string& s) {
    const auto it = by_name.find(s);
    if (it != by_name.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(names.size());
    names.push_back(s);
    by_name.emplace(s, id);
    return id;
  }
};

using PairKey = std::uint64_t;

constexpr PairKey pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<PairKey>(a) << 32) | b;
}

struct HeapEntry {
  std::int64_t count;
  std::uint32_t left, right;
};

}  // namespace

std::vector<MergeRule> pe_train(std::span<const std::string> corpus,
                                std::uint32_t num_merges,
                                std::uint32_t min_pair_count) {
  if (corpus.empty()) throw EmptyInputError("pe_train: empty corpus");
  if (min_pair_count < 1) min_pair_count = 1;

  TrainState st;
  st.seqs.reserve(corpus.size());
  for (const auto& smiles : corpus) {
    std::vector<std::uint32_t> seq;
    for (auto& tok : atom_tokenize(smiles)) seq.push_back(st.intern(tok));
    st.seqs.push_back(std::move(seq));
  }

  std::unordered_map<PairKey, std::int64_t> counts;
  std::unordered_map<PairKey, std::unordered_set<std::uint32_t>> where;

  // Most-frequent selection via a lazy heap: every count change is pushed and
  // stale entries are discarded on pop. Ties break lexicographically by
  // (left, right) surface strings.
  const auto lex_less = [&st](const HeapEntry& a, const HeapEntry& b) {
    if (st.names[a.left] != st.names[b.left])
      return st.names[a.left] < st.names[b.left];
    return st.names[a.right] < st.names[b.right];
  };
  const auto heap_less = [&](const HeapEntry& a, const HeapEntry& b) {
    if (a.count != b.count) return a.count < b.count;  // max-count first
    return lex_less(b, a);                             // then lex-smallest
  };
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(heap_less)>
      heap(heap_less);

  const auto bump = [&](std::uint32_t a, std::uint32_t b, std::int64_t delta,
                        std::uint32_t seq_id) {
    const PairKey key = pair_key(a, b);
    const std::int64_t now = (counts[key] += delta);
    if (delta > 0) where[key].insert(seq_id);
    heap.push({now, a, b});
  };

  for (std::uint32_t s = 0; s < st.seqs.size(); ++s) {
    const auto& seq = st.seqs[s];
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      bump(seq[i], seq[i + 1], +1, s);
    }
  }

  std::vector<MergeRule> rules;
  rules.reserve(num_merges);
  while (rules.size() < num_merges && !heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    const PairKey key = pair_key(top.left, top.right);
    const auto it = counts.find(key);
    if (it == counts.end() || it->second != top.count) continue;  // stale
    if (top.count < static_cast<std::int64_t>(min_pair_count)) break;

    const std::string left = st.names[top.left];
    const std::string right = st.names[top.right];
    const std::uint32_t merged_id = st.intern(left + right);
    rules.push_back({left, right, left + right,
                     static_cast<std::uint32_t>(rules.size() + 1)});

    // Rewrite every sequence that contains the pair: retract its old pair
    // counts, merge left-to-right, then re-add. The where-index may hold
    // stale sequence ids; they no longer contain the pair and are skipped.
    const auto hit_it = where.find(key);
    if (hit_it == where.end()) continue;
    std::vector<std::uint32_t> hits(hit_it->second.begin(), hit_it->second.end());
    std::sort(hits.begin(), hits.end());
    for (const std::uint32_t s : hits) {
      auto& seq = st.seqs[s];
      bool contains = false;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i] == top.left && seq[i + 1] == top.right) {
          contains = true;
          break;
        }
      }
      if (!contains) continue;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        bump(seq[i], seq[i + 1], -1, s);
      }
      std::vector<std::uint32_t> next;
      next.reserve(seq.size());
      for (std::size_t i = 0; i < seq.size();) {
        if (i + 1 < seq.size() && seq[i] == top.left &&
            seq[i + 1] == top.right) {
          next.push_back(merged_id);
          i += 2;
        } else {
          next.push_back(seq[i]);
          ++i;
        }
      }
      seq = std::move(next);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        bump(seq[i], seq[i + 1], +1, s);
      }
    }
    counts.erase(key);
    where.erase(key);
  }
  return rules;
}

namespace {

// Hashable (left, right) key; '\x1f' cannot occur inside a SMILES token.
std::string rule_key(std::string_view left, std::string_view right) {
  std::string k;
  k.reserve(left.size() + right.size() + 1);
  k.append(left);
  k.push_back('\x1f');
  k.append(right);
  return k;
}

}  // namespace

std::vector<std::string> apply_merges(std::vector<std::string> tokens,
                                      std::span<const MergeRule> rules) {
  if (rules.empty() || tokens.size() < 2) return tokens;
  std::unordered_map<std::string, std::uint32_t> rank_of;
  rank_of.reserve(rules.size());
  for (const auto& r : rules) rank_of.emplace(rule_key(r.left, r.right), r.rank);

  // Repeatedly merging the leftmost occurrence of the lowest-ranked applicable
  // rule is equivalent to one left-to-right pass per rule in rank order:
  // a merge's output token can only feed rules of strictly higher rank.
  for (;;) {
    std::uint32_t best_rank = 0;
    std::size_t best_pos = 0;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      const auto it = rank_of.find(rule_key(tokens[i], tokens[i + 1]));
      if (it != rank_of.end() && (best_rank == 0 || it->second < best_rank)) {
        best_rank = it->second;
        best_pos = i;
      }
    }
    if (best_rank == 0) break;
    tokens[best_pos] += tokens[best_pos + 1];
    tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
  }
  return tokens;
}

Vocabulary build_vocab(std::span<const std::string> corpus,
                       std::span<const MergeRule> rules, std::uint32_t m) {
  if (corpus.empty()) throw EmptyInputError("build_vocab: empty corpus");
  std::unordered_map<std::string, std::int64_t> freq;
  for (const auto& smiles : corpus) {
    for (auto& tok : apply_merges(atom_tokenize(smiles), rules)) {
      ++freq[std::move(tok)];
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(),
                                                           freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab(TokenScheme::kPairEncoding, m);
  for (auto& [token, count] : ranked) {
    if (vocab.size() >= m) break;
    vocab.insert(std::move(token));
  }
  return vocab;
}

Vocabulary build_char_vocab(std::span<const std::string> corpus,
                            std::uint32_t m) {
  if (corpus.empty()) throw EmptyInputError("build_char_vocab: empty corpus");
  Vocabulary vocab(TokenScheme::kChar, m);
  for (const auto& smiles : corpus) {
    for (auto& tok : char_tokenize(smiles)) {
      if (vocab.id_of(tok) == 0) vocab.insert(std::move(tok));
    }
  }
  return vocab;
}

TokenSequence encode_tokens(std::string_view smiles, const Vocabulary& vocab,
                            std::span<const MergeRule> rules) {
  if (smiles.empty()) throw EmptyInputError("encode_tokens: empty SMILES");
  std::vector<std::string> tokens;
  if (vocab.scheme() == TokenScheme::kChar) {
    tokens = char_tokenize(smiles);
  } else {
    tokens = apply_merges(atom_tokenize(smiles), rules);
  }
  TokenSequence ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(vocab.id_of(tok));
  return ids;
}

void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab,
                     std::span<const MergeRule> rules) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw IoError("cannot write vocabulary file: " + path.string());
  out << "HMVOCAB v1 " << to_string(vocab.scheme()) << ' ' << vocab.cap()
      << '\n';
  for (const auto& [token, id] : vocab.entries_by_id()) {
    out << token << '\t' << id << '\n';
  }
  out << "#MERGES\n";
  for (const auto& r : rules) {
    out << r.left << '\t' << r.right << '\t' << r.rank << '\n';
  }
  if (!out) throw IoError("failed writing vocabulary file: " + path.string());
}

std::pair<Vocabulary, std::vector<MergeRule>> load_vocabulary(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("vocabulary file is empty: " + path.string());
  }
  std::istringstream header(line);
  std::string magic, version, scheme_name;
  std::uint32_t cap = 0;
  header >> magic >> version >> scheme_name >> cap;
  if (magic != "HMVOCAB" || version != "v1" || !header || cap == 0) {
    throw DataError("bad vocabulary header: " + line);
  }
  Vocabulary vocab(token_scheme_from_string(scheme_name), cap);

  std::vector<std::pair<std::string, TokenId>> entries;
  bool in_merges = false;
  std::vector<MergeRule> rules;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "#MERGES") {
      in_merges = true;
      continue;
    }
    const std::size_t t1 = line.find('\t');
    if (t1 == std::string::npos) {
      throw DataError("bad vocabulary line: " + line);
    }
    if (!in_merges) {
      entries.emplace_back(line.substr(0, t1),
                           static_cast<TokenId>(
                               std::stoul(line.substr(t1 + 1))));
    } else {
      const std::size_t t2 = line.find('\t', t1 + 1);
      if (t2 == std::string::npos) {
        throw DataError("bad merge rule line: " + line);
      }
      MergeRule r;
      r.left = line.substr(0, t1);
      r.right = line.substr(t1 + 1, t2 - t1 - 1);
      r.merged = r.left + r.right;
      r.rank = static_cast<std::uint32_t>(std::stoul(line.substr(t2 + 1)));
      rules.push_back(std::move(r));
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second != i + 1) {
      throw DataError("vocabulary ids are not contiguous from 1");
    }
    vocab.insert(std::move(entries[i].first));
  }
  std::sort(rules.begin(), rules.end(),
            [](const MergeRule& a, const MergeRule& b) { return a.rank < b.rank; });
  return {std::move(vocab), std::move(rules)};
}

}  // namespace hdmole
