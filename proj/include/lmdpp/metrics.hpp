#ifndef LMDPP_METRICS_HPP
#define LMDPP_METRICS_HPP

#include "lmdpp/subset.hpp"

namespace lmdpp {

/// omega weighs missed label items against spurious ones.
struct LossWeights {
  double omega = 1.0;

  LossWeights() = default;
  explicit LossWeights(double w);
};

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

/// |y \ y_star| + |y_star \ y|.
std::size_t hamming_loss(const Subset& y_star, const Subset& y);

/// sum_{i in y} [i not in y_star] + omega * sum_{i not in y} [i in y_star].
double generalized_hamming(const Subset& y_star, const Subset& y, const LossWeights& w);

// Empty sets: P = 1 when both are empty and 0 when only the prediction is
// empty (recall is symmetric); F = 0 whenever P + R = 0.
PrfScores precision_recall_fscore(const Subset& y_pred, const Subset& y_star);

inline double fscore(const Subset& y_pred, const Subset& y_star) {
  return precision_recall_fscore(y_pred, y_star).fscore;
}

}  // namespace lmdpp

#endif  // LMDPP_METRICS_HPP
