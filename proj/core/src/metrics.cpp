#include "hdmole/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "hdmole/error.hpp"

namespace hdmole {

namespace {
constexpr double kSlop = 1e-9;  // cosine round-off tolerance
}

double confidence(double delta_p, double delta_n) {
  for (const double d : {delta_p, delta_n}) {
    if (d < -1.0 - kSlop || d > 1.0 + kSlop) {
      throw InvalidSimilarityError("confidence: similarity outside [-1, 1]");
    }
  }
  delta_p = std::clamp(delta_p, -1.0, 1.0);
  delta_n = std::clamp(delta_n, -1.0, 1.0);
  return 0.5 + 0.25 * (delta_p - delta_n);
}

double roc_auc(std::span<const ScoredPrediction> preds) {
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& p : preds) {
    if (p.label) {
      ++n_pos;
    } else {
      ++n_neg;
    }
  }
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedAucError("roc_auc: both labels must be present");
  }

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].confidence < preds[b].confidence;
  });

  // Sum of positive ranks, with tied confidences assigned the average rank
  // of their tie block. Ranks are 1-based.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() &&
           preds[order[j]].confidence == preds[order[i]].confidence) {
      ++j;
    }
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (preds[order[k]].label) pos_rank_sum += avg_rank;
    }
    i = j;
  }

  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace hdmole
