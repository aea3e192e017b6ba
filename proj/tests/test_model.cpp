#include "hdmole/model.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "hdmole/error.hpp"

using namespace hdmole;

namespace {

constexpr std::size_t kDim = 10000;
const Seed kImSeed{7};

const ItemMemory& shared_im() {
  static const ItemMemory im = build_item_memory(64, kDim, kImSeed);
  return im;
}

}  // namespace

TEST_CASE("item memory determinism, size, orthogonality") {
  const ItemMemory a = build_item_memory(5, kDim, kImSeed);
  const ItemMemory b = build_item_memory(5, kDim, kImSeed);
  for (TokenId id = 0; id <= 5; ++id) {
    CHECK(a.base(id) == b.base(id));
  }
  CHECK_THROWS_AS(a.base(6), InvalidOperandError);  // exactly m+1 entries
  for (TokenId i = 0; i <= 5; ++i) {
    for (TokenId j = i + 1; j <= 5; ++j) {
      CHECK(std::abs(cosine(a.base(i), a.base(j))) < 0.05);
    }
  }
}

TEST_CASE("uni-gram encoding of a single token is its base vector") {
  const auto& im = shared_im();
  const std::vector<TokenId> tokens{5};
  CHECK(encode_sample(tokens, im, Gram::kUnigram) == im.base(5));
}

TEST_CASE("uni-gram encodings of reversed sequences differ") {
  const auto& im = shared_im();
  const std::vector<TokenId> ab{3, 4};
  const std::vector<TokenId> ba{4, 3};
  const Hypervector hv_ab = encode_sample(ab, im, Gram::kUnigram);
  const Hypervector hv_ba = encode_sample(ba, im, Gram::kUnigram);
  CHECK(std::abs(cosine(hv_ab, hv_ba)) < 0.1);
}

TEST_CASE("bi-gram window formula: bind of per-position permuted bases") {
  const auto& im = shared_im();
  const std::vector<TokenId> tokens{2, 9};
  const Hypervector expected =
      bipolarize(bind(im.base(2), permute(im.base(9), 1)));
  CHECK(encode_sample(tokens, im, Gram::kBigram) == expected);
}

TEST_CASE("tri-gram sliding windows with outer positional permutation") {
  const auto& im = shared_im();
  const std::vector<TokenId> tokens{1, 2, 3, 4};
  Hypervector acc(kDim);
  for (std::size_t i = 0; i + 3 <= tokens.size(); ++i) {
    Hypervector window = im.base(tokens[i]);
    window = bind(window, permute(im.base(tokens[i + 1]), 1));
    window = bind(window, permute(im.base(tokens[i + 2]), 2));
    bundle_into(acc, permute(window, i));
  }
  CHECK(encode_sample(tokens, im, Gram::kTrigram) == bipolarize(acc));
}

TEST_CASE("short sequences: strict error and auto fallback") {
  const auto& im = shared_im();
  const std::vector<TokenId> one{3};
  CHECK_THROWS_AS(encode_sample(one, im, Gram::kTrigram), SequenceTooShortError);
  CHECK(encode_sample_auto(one, im, Gram::kTrigram) ==
        encode_sample(one, im, Gram::kUnigram));
  const std::vector<TokenId> two{3, 5};
  CHECK(encode_sample_auto(two, im, Gram::kTrigram) ==
        encode_sample(two, im, Gram::kBigram));
  const std::vector<TokenId> empty;
  CHECK_THROWS_AS(encode_sample_auto(empty, im, Gram::kUnigram),
                  SequenceTooShortError);
}

TEST_CASE("changing one token changes at most n gram contributions") {
  const auto& im = shared_im();
  std::vector<TokenId> tokens{1, 2, 3, 4, 5, 6, 7, 8};
  for (const Gram gram : {Gram::kUnigram, Gram::kBigram, Gram::kTrigram}) {
    const std::size_t n = static_cast<std::size_t>(gram);
    // Rebuild the pre-bipolarization sums and compare contribution counts.
    const auto raw_sum = [&](const std::vector<TokenId>& t) {
      Hypervector acc(kDim);
      for (std::size_t i = 0; i + n <= t.size(); ++i) {
        Hypervector window = im.base(t[i]);
        for (std::size_t j = 1; j < n; ++j) {
          window = bind(window, permute(im.base(t[i + j]), j));
        }
        bundle_into(acc, permute(window, i));
      }
      return acc;
    };
    auto mutated = tokens;
    mutated[4] = 20;
    const Hypervector before = raw_sum(tokens);
    const Hypervector after = raw_sum(mutated);
    // The diff is a sum of at most 2n window vectors (n removed, n added),
    // each with entries in {-1, +1}.
    for (std::size_t e = 0; e < kDim; ++e) {
      CHECK(std::abs(before[e] - after[e]) <= static_cast<Element>(2 * n));
    }
  }
}

namespace {

// Two clusters built from disjoint token pools; orthogonal by construction.
struct ToySet {
  std::vector<Hypervector> hvs;
  std::vector<std::uint8_t> labels;
};

ToySet make_toy_set(std::size_t per_class, std::size_t len, Seed seed) {
  const ItemMemory im = build_item_memory(40, kDim, seed);
  ToySet out;
  SplitMix64 gen(Seed{seed.value + 999});
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t s = 0; s < per_class; ++s) {
      std::vector<TokenId> tokens;
      for (std::size_t i = 0; i < len; ++i) {
        // Class 0 draws tokens 1..20, class 1 draws 21..40.
        tokens.push_back(static_cast<TokenId>(1 + 20 * c + gen.next_below(20)));
      }
      out.hvs.push_back(encode_sample(tokens, im, Gram::kUnigram));
      out.labels.push_back(static_cast<std::uint8_t>(c));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("train sums per class and validates inputs") {
  const auto& im = shared_im();
  const Hypervector a = im.base(1);
  const Hypervector b = im.base(2);
  {
    const std::vector<Hypervector> samples{a, b};
    const std::vector<std::uint8_t> labels{0, 1};
    const AssociativeMemory am = train(samples, labels, 2);
    CHECK(am.class_hvs[0] == a);
    CHECK(am.class_hvs[1] == b);
  }
  {
    const std::vector<Hypervector> samples{a, a, b};
    const std::vector<std::uint8_t> labels{0, 0, 1};
    const AssociativeMemory am = train(samples, labels, 2);
    CHECK(am.class_hvs[0] == bundle(a, a));
  }
  {
    // Order invariance.
    const std::vector<Hypervector> s1{a, b, im.base(3)};
    const std::vector<std::uint8_t> l1{0, 1, 0};
    const std::vector<Hypervector> s2{im.base(3), b, a};
    const std::vector<std::uint8_t> l2{0, 1, 0};
    CHECK(train(s1, l1, 2).class_hvs == train(s2, l2, 2).class_hvs);
  }
  const std::vector<Hypervector> samples{a};
  const std::vector<std::uint8_t> labels{0};
  CHECK_THROWS_AS(train(samples, labels, 2), EmptyClassError);
}

TEST_CASE("infer argmax, tie-break, and similarity oracle") {
  const auto& im = shared_im();
  AssociativeMemory am;
  am.class_hvs = {im.base(1), im.base(2)};
  const Inference inf = infer(am, im.base(1));
  CHECK(inf.predicted_class == 0);
  CHECK(inf.similarities[0] == doctest::Approx(1.0));
  CHECK(std::abs(inf.similarities[1]) < 0.05);

  // Exact tie goes to the lowest class index.
  AssociativeMemory tie;
  tie.class_hvs = {im.base(3), im.base(3)};
  CHECK(infer(tie, im.base(4)).predicted_class == 0);

  // Brute-force recomputation on a trained memory.
  const ToySet toy = make_toy_set(10, 12, Seed{55});
  const AssociativeMemory trained = train(toy.hvs, toy.labels, 2);
  const Hypervector query = toy.hvs[3];
  const Inference got = infer(trained, query);
  const double c0 = cosine(query, trained.class_hvs[0]);
  const double c1 = cosine(query, trained.class_hvs[1]);
  CHECK(got.similarities[0] == doctest::Approx(c0).epsilon(1e-12));
  CHECK(got.similarities[1] == doctest::Approx(c1).epsilon(1e-12));
  CHECK(got.predicted_class == (c1 > c0 ? 1u : 0u));
}

TEST_CASE("a clean pass over separable clusters changes nothing") {
  const ToySet toy = make_toy_set(12, 10, Seed{77});
  AssociativeMemory am = train(toy.hvs, toy.labels, 2);
  const AssociativeMemory before = am;
  const std::size_t errors = retrain_epoch(am, toy.hvs, toy.labels);
  CHECK(errors == 0);
  CHECK(am.class_hvs == before.class_hvs);
}

TEST_CASE("a forced misprediction updates and conserves the class sum") {
  // Train on clean labels, then retrain against one flipped label: the
  // model's (correct) prediction now disagrees, so the update must fire.
  const ToySet toy = make_toy_set(3, 10, Seed{88});
  std::vector<std::uint8_t> flipped = toy.labels;
  flipped[0] = 1;
  AssociativeMemory am = train(toy.hvs, toy.labels, 2);

  const Hypervector& s = toy.hvs[0];
  const Hypervector sum_before = bundle(am.class_hvs[0], am.class_hvs[1]);
  const double before_right = cosine(s, am.class_hvs[1]);
  const double before_wrong = cosine(s, am.class_hvs[0]);

  const std::size_t errors = retrain_epoch(am, toy.hvs, flipped);
  CHECK(errors >= 1);
  CHECK(cosine(s, am.class_hvs[1]) > before_right);
  CHECK(cosine(s, am.class_hvs[0]) < before_wrong);
  CHECK(bundle(am.class_hvs[0], am.class_hvs[1]) == sum_before);
}

TEST_CASE("fit separates the toy clusters and is deterministic") {
  const ToySet toy = make_toy_set(5, 10, Seed{99});
  const AssociativeMemory am = fit(toy.hvs, toy.labels, 2, 3);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < toy.hvs.size(); ++i) {
    correct += infer(am, toy.hvs[i]).predicted_class == toy.labels[i];
  }
  CHECK(correct == toy.hvs.size());

  const AssociativeMemory again = fit(toy.hvs, toy.labels, 2, 3);
  CHECK(am.class_hvs == again.class_hvs);
}

TEST_CASE("fit with epochs=1 equals train plus one pass") {
  ToySet toy = make_toy_set(6, 8, Seed{123});
  // Perturb labels so the single pass actually updates.
  toy.labels[1] = static_cast<std::uint8_t>(1 - toy.labels[1]);
  const AssociativeMemory fitted = fit(toy.hvs, toy.labels, 2, 1);
  AssociativeMemory manual = train(toy.hvs, toy.labels, 2);
  retrain_epoch(manual, toy.hvs, toy.labels);
  CHECK(fitted.class_hvs == manual.class_hvs);
}

TEST_CASE("argmax is invariant under uniform class scaling") {
  const ToySet toy = make_toy_set(8, 9, Seed{321});
  const AssociativeMemory am = train(toy.hvs, toy.labels, 2);
  AssociativeMemory scaled = am;
  for (auto& class_hv : scaled.class_hvs) {
    for (std::size_t e = 0; e < class_hv.dim(); ++e) class_hv[e] *= 7;
  }
  for (const auto& hv : toy.hvs) {
    CHECK(infer(am, hv).predicted_class == infer(scaled, hv).predicted_class);
  }
}

TEST_CASE("model save/load round-trip and size") {
  const ToySet toy = make_toy_set(10, 10, Seed{456});
  const AssociativeMemory am = fit(toy.hvs, toy.labels, 2, 5);
  ModelInfo info;
  info.dim = kDim;
  info.num_classes = 2;
  info.im_seed = Seed{456};
  info.m = 40;
  info.gram = Gram::kUnigram;
  info.scheme = TokenScheme::kPairEncoding;
  info.vocab_path = "toy.vocab";

  const auto path = std::filesystem::temp_directory_path() / "hdmole_model_test.bin";
  save_model(path, am, info);

  const auto size = std::filesystem::file_size(path);
  CHECK(size >= 2 * kDim * 4);          // two i32 class vectors
  CHECK(size <= 100 * 1024);            // stays within 100 kB at dim 10,000

  const auto [loaded, loaded_info] = load_model(path);
  CHECK(loaded.class_hvs == am.class_hvs);
  CHECK(loaded_info.dim == info.dim);
  CHECK(loaded_info.num_classes == info.num_classes);
  CHECK(loaded_info.im_seed == info.im_seed);
  CHECK(loaded_info.m == info.m);
  CHECK(loaded_info.gram == info.gram);
  CHECK(loaded_info.scheme == info.scheme);
  CHECK(loaded_info.vocab_path == info.vocab_path);
  std::filesystem::remove(path);
}

TEST_CASE("model load rejects corruption") {
  const ToySet toy = make_toy_set(4, 6, Seed{789});
  const AssociativeMemory am = train(toy.hvs, toy.labels, 2);
  ModelInfo info;
  info.dim = kDim;
  info.num_classes = 2;
  info.im_seed = Seed{789};
  info.m = 40;

  const auto path = std::filesystem::temp_directory_path() / "hdmole_model_bad.bin";
  save_model(path, am, info);

  // Corrupt the magic.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(load_model(path), ModelFormatError);

  // Truncate.
  save_model(path, am, info);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
  CHECK_THROWS_AS(load_model(path), ModelFormatError);
  std::filesystem::remove(path);
}
