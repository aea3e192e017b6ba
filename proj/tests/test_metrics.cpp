#include "hdmole/metrics.hpp"

#include <vector>

#include "doctest.h"
#include "hdmole/error.hpp"
#include "hdmole/rng.hpp"
#include "oracles.hpp"

using namespace hdmole;

TEST_CASE("confidence endpoints and direct substitution") {
  CHECK(confidence(1.0, -1.0) == doctest::Approx(1.0));
  CHECK(confidence(0.37, 0.37) == doctest::Approx(0.5));
  CHECK(confidence(-0.8, -0.8) == doctest::Approx(0.5));
  CHECK(confidence(0.5, 0.1) == doctest::Approx(0.6));
}

TEST_CASE("confidence rejects out-of-range similarities") {
  CHECK_THROWS_AS(confidence(1.5, 0.0), InvalidSimilarityError);
  CHECK_THROWS_AS(confidence(0.0, -1.5), InvalidSimilarityError);
}

TEST_CASE("confidence monotonicity") {
  double prev = confidence(-1.0, 0.0);
  for (double d = -0.9; d <= 1.0; d += 0.1) {
    const double now = confidence(d, 0.0);
    CHECK(now > prev);
    prev = now;
  }
  prev = confidence(0.0, -1.0);
  for (double d = -0.9; d <= 1.0; d += 0.1) {
    const double now = confidence(0.0, d);
    CHECK(now < prev);
    prev = now;
  }
}

TEST_CASE("roc_auc on the worked examples") {
  {
    const std::vector<ScoredPrediction> preds{{0.9, 1}, {0.8, 1}, {0.4, 0}};
    CHECK(roc_auc(preds) == doctest::Approx(1.0));
  }
  {
    const std::vector<ScoredPrediction> preds{{0.5, 1}, {0.5, 0}, {0.5, 1}};
    CHECK(roc_auc(preds) == doctest::Approx(0.5));
  }
  {
    // Pairwise oracle by hand: 1 + 1 + 0.5 + 1 out of 4 pairs.
    const std::vector<ScoredPrediction> preds{
        {0.9, 1}, {0.6, 0}, {0.6, 1}, {0.2, 0}};
    CHECK(roc_auc(preds) == doctest::Approx(0.875));
  }
}

TEST_CASE("roc_auc rejects single-class inputs") {
  const std::vector<ScoredPrediction> all_pos{{0.9, 1}, {0.1, 1}};
  CHECK_THROWS_AS(roc_auc(all_pos), UndefinedAucError);
  const std::vector<ScoredPrediction> all_neg{{0.9, 0}, {0.1, 0}};
  CHECK_THROWS_AS(roc_auc(all_neg), UndefinedAucError);
}

TEST_CASE("rank implementation equals the pairwise oracle on 1000 instances") {
  SplitMix64 gen(Seed{2024});
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t n = 2 + gen.next_below(49);
    std::vector<ScoredPrediction> preds;
    preds.reserve(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse confidence grid so ties actually happen.
      const double conf = static_cast<double>(gen.next_below(8)) / 7.0;
      const std::uint8_t label = gen.next_below(2) ? 1 : 0;
      has_pos |= label == 1;
      has_neg |= label == 0;
      preds.push_back({conf, label});
    }
    if (!has_pos) preds.push_back({0.3, 1});
    if (!has_neg) preds.push_back({0.6, 0});
    CHECK(roc_auc(preds) == oracle::pairwise_auc(preds));
  }
}

TEST_CASE("roc_auc is invariant under strictly increasing transforms") {
  SplitMix64 gen(Seed{11});
  for (int instance = 0; instance < 100; ++instance) {
    std::vector<ScoredPrediction> preds, squashed;
    for (int i = 0; i < 30; ++i) {
      const double conf = static_cast<double>(gen.next_below(10)) / 9.0;
      const std::uint8_t label = i % 3 == 0 ? 1 : 0;
      preds.push_back({conf, label});
      squashed.push_back({conf * conf * 0.5 + 0.1, label});  // monotone on [0,1]
    }
    CHECK(roc_auc(preds) == doctest::Approx(roc_auc(squashed)).epsilon(1e-12));
  }
}

TEST_CASE("flipping all labels complements the AUC") {
  SplitMix64 gen(Seed{12});
  for (int instance = 0; instance < 100; ++instance) {
    std::vector<ScoredPrediction> preds, flipped;
    for (int i = 0; i < 25; ++i) {
      const double conf = static_cast<double>(gen.next_below(6)) / 5.0;
      const std::uint8_t label = gen.next_below(2) ? 1 : 0;
      preds.push_back({conf, label});
      flipped.push_back({conf, static_cast<std::uint8_t>(1 - label)});
    }
    preds.push_back({0.44, 1});
    preds.push_back({0.55, 0});
    flipped.push_back({0.44, 0});
    flipped.push_back({0.55, 1});
    CHECK(roc_auc(preds) == doctest::Approx(1.0 - roc_auc(flipped)).epsilon(1e-12));
  }
}
