#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdmole/hypervector.hpp"
#include "hdmole/tokenizer.hpp"

namespace hdmole {

enum class Gram : std::uint8_t { kUnigram = 1, kBigram = 2, kTrigram = 3 };

Gram gram_from_int(int n);

/// Seeded table of m+1 random bipolar base hypervectors, one per token id
/// (id 0 is the unknown token). Fully reconstructible from (seed, m, dim).
class ItemMemory {
 public:
  ItemMemory(std::uint32_t m, std::size_t dim, Seed seed);

  const Hypervector& base(TokenId id) const;

  std::uint32_t m() const noexcept { return m_; }
  std::size_t dim() const noexcept { return dim_; }
  Seed seed() const noexcept { return seed_; }

 private:
  std::uint32_t m_;
  std::size_t dim_;
  Seed seed_;
  std::vector<Hypervector> base_hvs_;
};

inline ItemMemory build_item_memory(std::uint32_t m, std::size_t dim, Seed seed) {
  return ItemMemory(m, dim, seed);
}

/// The trained model: one accumulator class hypervector per class. Class
/// hypervectors stay un-bipolarized; retraining subtracts and adds whole
/// sample hypervectors, which only works on the raw sums.
struct AssociativeMemory {
  std::vector<Hypervector> class_hvs;

  std::size_t num_classes() const noexcept { return class_hvs.size(); }
  std::size_t dim() const noexcept {
    return class_hvs.empty() ? 0 : class_hvs.front().dim();
  }
};

/// Encodes a token sequence into a bipolar sample hypervector.
///
/// Uni-gram:  bipolarize( sum_i rho^i(B[t_i]) ).
/// N-gram (n = 2, 3): the window at i binds per-position permuted bases,
///   G_i = prod_{j<n} rho^j(B[t_{i+j}]), and the sample is
///   bipolarize( sum_i rho^i(G_i) ) over the |tokens|-n+1 sliding windows.
///
/// Throws SequenceTooShortError when |tokens| < n.
Hypervector encode_sample(std::span<const TokenId> tokens, const ItemMemory& im,
                          Gram gram);

/// encode_sample, falling back to the largest gram that fits a short
/// sequence (a 1-token sequence under tri-gram encodes as uni-gram).
Hypervector encode_sample_auto(std::span<const TokenId> tokens,
                               const ItemMemory& im, Gram gram);

/// One-shot training: class_hvs[c] = element-wise sum of the sample
/// hypervectors labeled c. Every class in 0..p-1 needs at least one sample.
AssociativeMemory train(std::span<const Hypervector> samples,
                        std::span<const std::uint8_t> labels,
                        std::size_t num_classes);

struct Inference {
  std::size_t predicted_class = 0;
  std::vector<double> similarities;
};

/// argmax over cosine(query, class_hvs[c]); ties go to the lowest index.
Inference infer(const AssociativeMemory& am, const Hypervector& query);

/// One error-driven pass in list order: each misprediction moves the sample
/// hypervector from the wrongly predicted class to the labeled one. Returns
/// the misprediction count of this pass (measured against the continuously
/// updated memory, before each sample's own update).
std::size_t retrain_epoch(AssociativeMemory& am,
                          std::span<const Hypervector> samples,
                          std::span<const std::uint8_t> labels);

/// train() plus up to `epochs` retrain passes in fixed sample order, early
/// stopping on a zero-misprediction pass; returns the snapshot with the
/// fewest mispredictions (earliest pass wins ties). When `shuffle_order` is
/// set, each pass visits samples in a fresh seeded shuffle instead.
AssociativeMemory fit(std::span<const Hypervector> samples,
                      std::span<const std::uint8_t> labels,
                      std::size_t num_classes, std::size_t epochs,
                      std::optional<Seed> shuffle_order = std::nullopt);

/// Metadata stored alongside the class hypervectors. The item memory is not
/// stored; it regenerates from (im_seed, m, dim).
struct ModelInfo {
  std::uint32_t dim = 0;
  std::uint16_t num_classes = 0;
  Seed im_seed;
  std::uint32_t m = 0;
  Gram gram = Gram::kUnigram;
  TokenScheme scheme = TokenScheme::kChar;
  std::string vocab_path;
};

/// Binary model file: magic "HDMD", version u16, dim u32, p u16, im-seed
/// u64, m u32, gram u8, scheme u8, vocab path (u32 length + UTF-8 bytes),
/// then p class hypervectors as little-endian i32 arrays.
void save_model(const std::filesystem::path& path, const AssociativeMemory& am,
                const ModelInfo& info);

std::pair<AssociativeMemory, ModelInfo> load_model(
    const std::filesystem::path& path);

}  // namespace hdmole
