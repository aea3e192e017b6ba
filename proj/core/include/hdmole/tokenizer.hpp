#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hdmole {

/// Numeric token id. 0 is reserved for tokens missing from the vocabulary.
using TokenId = std::uint32_t;

/// Ordered token ids for one SMILES string; every id lies in [0, m].
using TokenSequence = std::vector<TokenId>;

enum class TokenScheme : std::uint8_t { kChar = 0, kPairEncoding = 1 };

std::string_view to_string(TokenScheme scheme);
TokenScheme token_scheme_from_string(std::string_view name);

/// One learned pair merge. merged == left + right; ranks follow training
/// order (rank 1 was the most frequent pair when it was merged).
struct MergeRule {
  std::string left;
  std::string right;
  std::string merged;
  std::uint32_t rank = 0;

  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

/// Token-string -> id table. Ids are unique and contiguous from 1; id 0 is
/// the implicit unknown token and never stored.
class Vocabulary {
 public:
  Vocabulary() : Vocabulary(TokenScheme::kChar, 1) {}
  Vocabulary(TokenScheme scheme, std::uint32_t cap);

  TokenScheme scheme() const noexcept { return scheme_; }
  std::uint32_t cap() const noexcept { return cap_; }
  std::uint32_t size() const noexcept {
    return static_cast<std::uint32_t>(ids_.size());
  }

  /// Id for a token, or 0 when absent.
  TokenId id_of(std::string_view token) const;

  /// Inserts with the next id. No-op if present; ignored once full.
  void insert(std::string token);

  /// (token, id) pairs sorted by id; serialization order.
  std::vector<std::pair<std::string, TokenId>> entries_by_id() const;

 private:
  TokenScheme scheme_;
  std::uint32_t cap_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// One token per character, in order. Empty input -> EmptyInputError.
std::vector<std::string> char_tokenize(std::string_view smiles);

/// Chemically atomic units: bracket atoms "[...]" as one token, Cl/Br as one
/// token, "%nn" ring closures as one token, every other character alone.
/// Unclosed '[' -> MalformedSmilesError.
std::vector<std::string> atom_tokenize(std::string_view smiles);

/// Trains pair-encoding merges over the atom-tokenized corpus: repeatedly
/// merges the most frequent adjacent pair (ties broken lexicographically by
/// (left, right)) until num_merges rules exist or no pair occurs at least
/// min_pair_count times.
std::vector<MergeRule> pe_train(std::span<const std::string> corpus,
                                std::uint32_t num_merges,
                                std::uint32_t min_pair_count = 2);

/// Applies rules to the corpus, counts final token frequencies, keeps the
/// top-m tokens: id 1 for the most frequent, ties lexicographic.
Vocabulary build_vocab(std::span<const std::string> corpus,
                       std::span<const MergeRule> rules, std::uint32_t m);

/// Char-scheme table: ids by first appearance over the corpus in file order.
Vocabulary build_char_vocab(std::span<const std::string> corpus,
                            std::uint32_t m);

/// Applies merge rules in rank order; never lengthens the sequence.
std::vector<std::string> apply_merges(std::vector<std::string> tokens,
                                      std::span<const MergeRule> rules);

/// Tokenizes with the vocabulary's scheme and maps tokens to ids
/// (unknown -> 0). Pair-encoding runs atom_tokenize + apply_merges first.
TokenSequence encode_tokens(std::string_view smiles, const Vocabulary& vocab,
                            std::span<const MergeRule> rules);

/// Plain-text vocabulary format:
///   HMVOCAB v1 <scheme> <m>
///   token<TAB>id              (one per entry)
///   #MERGES
///   left<TAB>right<TAB>rank   (one per rule)
void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab,
                     std::span<const MergeRule> rules);

std::pair<Vocabulary, std::vector<MergeRule>> load_vocabulary(
    const std::filesystem::path& path);

}  // namespace hdmole
