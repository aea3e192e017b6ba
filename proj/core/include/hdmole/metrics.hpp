#pragma once

#include <cstdint>
#include <span>

namespace hdmole {

/// Confidence that a query is positive, from its class similarities:
/// 1/2 + 1/4 * (delta_p - delta_n). The similarity difference spans [-2, 2],
/// so the result spans [0, 1]. Inputs outside [-1, 1] (beyond float slop)
/// throw InvalidSimilarityError.
double confidence(double delta_p, double delta_n);

struct ScoredPrediction {
  double confidence = 0.0;
  std::uint8_t label = 0;  // binary
};

/// Rank-based (Mann-Whitney) ROC-AUC with average ranks for ties: the
/// probability that a random positive outranks a random negative, ties
/// counting one half. Single-class input throws UndefinedAucError.
double roc_auc(std::span<const ScoredPrediction> preds);

}  // namespace hdmole
