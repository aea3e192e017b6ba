#include "hdmole/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hdmole/error.hpp"

namespace hdmole {

Gram gram_from_int(int n) {
  if (n < 1 || n > 3) throw ConfigError("gram size must be 1, 2, or 3");
  return static_cast<Gram>(n);
}

ItemMemory::ItemMemory(std::uint32_t m, std::size_t dim, Seed seed)
    : m_(m), dim_(dim), seed_(seed) {
  if (m < 1) throw ConfigError("item memory needs m >= 1");
  base_hvs_.reserve(m + 1u);
  for (std::uint32_t i = 0; i <= m; ++i) {
    base_hvs_.push_back(random_hv(seed, i, dim));
  }
}

const Hypervector& ItemMemory::base(TokenId id) const {
  if (id >= base_hvs_.size()) {
    throw InvalidOperandError("token id " + std::to_string(id) +
                              " outside item memory of size " +
                              std::to_string(base_hvs_.size()));
  }
  return base_hvs_[id];
}

namespace {

/// acc[(i + k) mod dim] += v[i]; the fused permute-and-bundle hot path.
void add_rotated(Hypervector& acc, const Hypervector& v, std::size_t k) {
  const std::size_t d = acc.dim();
  const std::size_t shift = k % d;
  auto a = acc.elements();
  const auto src = v.elements();
  for (std::size_t i = 0; i < d - shift; ++i) a[i + shift] += src[i];
  for (std::size_t i = d - shift; i < d; ++i) a[i + shift - d] += src[i];
}

}  // namespace

Hypervector encode_sample(std::span<const TokenId> tokens, const ItemMemory& im,
                          Gram gram) {
  const auto n = static_cast<std::size_t>(gram);
  if (tokens.size() < n) {
    throw SequenceTooShortError("encode_sample: " + std::to_string(tokens.size()) +
                                " tokens but gram size " + std::to_string(n));
  }
  Hypervector acc(im.dim());
  if (n == 1) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      add_rotated(acc, im.base(tokens[i]), i);
    }
  } else {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      Hypervector gram_hv = im.base(tokens[i]);
      for (std::size_t j = 1; j < n; ++j) {
        gram_hv = bind(gram_hv, permute(im.base(tokens[i + j]), j));
      }
      add_rotated(acc, gram_hv, i);
    }
  }
  return bipolarize(acc);
}

Hypervector encode_sample_auto(std::span<const TokenId> tokens,
                               const ItemMemory& im, Gram gram) {
  auto n = static_cast<std::size_t>(gram);
  if (tokens.empty()) {
    throw SequenceTooShortError("encode_sample: empty token sequence");
  }
  n = std::min(n, tokens.size());
  return encode_sample(tokens, im, static_cast<Gram>(n));
}

AssociativeMemory train(std::span<const Hypervector> samples,
                        std::span<const std::uint8_t> labels,
                        std::size_t num_classes) {
  if (samples.size() != labels.size()) {
    throw InvalidOperandError("train: samples and labels sizes differ");
  }
  if (num_classes < 2) throw ConfigError("train: need at least 2 classes");
  if (samples.empty()) throw EmptyClassError("train: no samples");

  const std::size_t dim = samples.front().dim();
  AssociativeMemory am;
  am.class_hvs.assign(num_classes, Hypervector(dim));
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (labels[i] >= num_classes) {
      throw InvalidOperandError("train: label out of range");
    }
    bundle_into(am.class_hvs[labels[i]], samples[i]);
    ++counts[labels[i]];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      throw EmptyClassError("train: class " + std::to_string(c) +
                            " has no samples");
    }
  }
  return am;
}

Inference infer(const AssociativeMemory& am, const Hypervector& query) {
  Inference result;
  result.similarities.reserve(am.num_classes());
  for (const auto& class_hv : am.class_hvs) {
    result.similarities.push_back(cosine(query, class_hv));
  }
  result.predicted_class = static_cast<std::size_t>(
      std::max_element(result.similarities.begin(), result.similarities.end()) -
      result.similarities.begin());
  return result;
}

namespace {

std::size_t retrain_pass(AssociativeMemory& am,
                         std::span<const Hypervector> samples,
                         std::span<const std::uint8_t> labels,
                         std::span<const std::uint32_t> order) {
  const std::size_t p = am.num_classes();

  // Incremental class norms: each update changes a class by +-sample, and
  // |C +- S|^2 = |C|^2 +- 2 dot(C, S) + |S|^2, so the pass stays O(dim) per
  // sample instead of recomputing norms.
  std::vector<std::int64_t> class_norm_sq(p);
  for (std::size_t c = 0; c < p; ++c) {
    class_norm_sq[c] = norm_squared(am.class_hvs[c]);
  }

  std::size_t mispredictions = 0;
  std::vector<std::int64_t> dots(p);
  for (const std::uint32_t i : order) {
    const Hypervector& s = samples[i];
    const std::int64_t s_norm_sq = norm_squared(s);
    if (s_norm_sq == 0) {
      throw UndefinedSimilarityError("retrain_epoch: all-zero sample");
    }
    std::size_t best = 0;
    double best_sim = -2.0;
    for (std::size_t c = 0; c < p; ++c) {
      if (class_norm_sq[c] == 0) {
        throw UndefinedSimilarityError("retrain_epoch: all-zero class");
      }
      dots[c] = dot(s, am.class_hvs[c]);
      const double sim = static_cast<double>(dots[c]) /
                         (std::sqrt(static_cast<double>(s_norm_sq)) *
                          std::sqrt(static_cast<double>(class_norm_sq[c])));
      if (sim > best_sim) {
        best_sim = sim;
        best = c;
      }
    }
    const std::size_t truth = labels[i];
    if (best != truth) {
      ++mispredictions;
      auto wrong = am.class_hvs[best].elements();
      auto right = am.class_hvs[truth].elements();
      const auto sample = s.elements();
      for (std::size_t e = 0; e < sample.size(); ++e) {
        wrong[e] -= sample[e];
        right[e] += sample[e];
      }
      class_norm_sq[best] += s_norm_sq - 2 * dots[best];
      class_norm_sq[truth] += s_norm_sq + 2 * dots[truth];
    }
  }
  return mispredictions;
}

std::vector<std::uint32_t> identity_order(std::size_t n) {
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  return order;
}

}  // namespace

std::size_t retrain_epoch(AssociativeMemory& am,
                          std::span<const Hypervector> samples,
                          std::span<const std::uint8_t> labels) {
  if (samples.size() != labels.size()) {
    throw InvalidOperandError("retrain_epoch: samples and labels sizes differ");
  }
  return retrain_pass(am, samples, labels, identity_order(samples.size()));
}

AssociativeMemory fit(std::span<const Hypervector> samples,
                      std::span<const std::uint8_t> labels,
                      std::size_t num_classes, std::size_t epochs,
                      std::optional<Seed> shuffle_order) {
  if (epochs < 1) throw ConfigError("fit: epochs must be >= 1");
  AssociativeMemory am = train(samples, labels, num_classes);

  AssociativeMemory best = am;
  std::size_t best_errors = samples.size() + 1;
  std::vector<std::uint32_t> order = identity_order(samples.size());
  for (std::size_t pass = 0; pass < epochs; ++pass) {
    if (shuffle_order) {
      SplitMix64 gen(Seed{shuffle_order->value + pass});
      deterministic_shuffle(order, gen);
    }
    const std::size_t errors = retrain_pass(am, samples, labels, order);
    if (errors < best_errors) {
      best_errors = errors;
      best = am;
    }
    if (errors == 0) break;
  }
  return best;
}

namespace {

constexpr char kMagic[4] = {'H', 'D', 'M', 'D'};
constexpr std::uint16_t kFormatVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T value) {
  unsigned char bytes[sizeof(T)];
  auto u = static_cast<std::make_unsigned_t<T>>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw ModelFormatError("model file truncated");
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u |= static_cast<std::make_unsigned_t<T>>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(u);
}

}  // namespace

void save_model(const std::filesystem::path& path, const AssociativeMemory& am,
                const ModelInfo& info) {
  if (am.num_classes() != info.num_classes || am.dim() != info.dim) {
    throw InvalidOperandError("save_model: metadata does not match memory");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_le(out, kFormatVersion);
  write_le(out, info.dim);
  write_le(out, info.num_classes);
  write_le(out, info.im_seed.value);
  write_le(out, info.m);
  write_le(out, static_cast<std::uint8_t>(info.gram));
  write_le(out, static_cast<std::uint8_t>(info.scheme));
  write_le(out, static_cast<std::uint32_t>(info.vocab_path.size()));
  out.write(info.vocab_path.data(),
            static_cast<std::streamsize>(info.vocab_path.size()));
  for (const auto& class_hv : am.class_hvs) {
    for (std::size_t i = 0; i < class_hv.dim(); ++i) {
      write_le(out, class_hv[i]);
    }
  }
  if (!out) throw IoError("failed writing model file: " + path.string());
}

std::pair<AssociativeMemory, ModelInfo> load_model(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path.string());
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ModelFormatError("not a model file (bad magic)");
  }
  const auto version = read_le<std::uint16_t>(in);
  if (version != kFormatVersion) {
    throw ModelFormatError("unsupported model format version " +
                           std::to_string(version));
  }
  ModelInfo info;
  info.dim = read_le<std::uint32_t>(in);
  info.num_classes = read_le<std::uint16_t>(in);
  info.im_seed.value = read_le<std::uint64_t>(in);
  info.m = read_le<std::uint32_t>(in);
  const auto gram_raw = read_le<std::uint8_t>(in);
  if (gram_raw < 1 || gram_raw > 3) {
    throw ModelFormatError("bad gram size in model file");
  }
  info.gram = static_cast<Gram>(gram_raw);
  const auto scheme_raw = read_le<std::uint8_t>(in);
  if (scheme_raw > 1) throw ModelFormatError("bad tokenizer scheme in model file");
  info.scheme = static_cast<TokenScheme>(scheme_raw);
  const auto path_len = read_le<std::uint32_t>(in);
  info.vocab_path.resize(path_len);
  in.read(info.vocab_path.data(), path_len);
  if (!in) throw ModelFormatError("model file truncated");
  if (info.dim == 0 || info.num_classes == 0) {
    throw ModelFormatError("model file declares empty memory");
  }

  AssociativeMemory am;
  am.class_hvs.assign(info.num_classes, Hypervector(info.dim));
  for (auto& class_hv : am.class_hvs) {
    for (std::size_t i = 0; i < info.dim; ++i) {
      class_hv[i] = read_le<std::int32_t>(in);
    }
  }
  if (in.peek() != EOF) {
    throw ModelFormatError("trailing bytes after class hypervectors");
  }
  return {std::move(am), std::move(info)};
}

}  // namespace hdmole
