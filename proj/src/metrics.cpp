#include "lmdpp/metrics.hpp"

#include <cmath>
#include <string>

namespace lmdpp {

LossWeights::LossWeights(double w) : omega(w) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw DomainError("omega must be positive and finite, got " + std::to_string(w));
}

std::size_t hamming_loss(const Subset& y_star, const Subset& y) {
  const std::size_t common = intersection_size(y_star, y);
  return (y.size() - common) + (y_star.size() - common);
}

double generalized_hamming(const Subset& y_star, const Subset& y, const LossWeights& w) {
  const std::size_t common = intersection_size(y_star, y);
  const auto spurious = static_cast<double>(y.size() - common);
  const auto missed = static_cast<double>(y_star.size() - common);
  return spurious + w.omega * missed;
}

namespace {

double ratio(std::size_t hits, std::size_t denom, bool other_empty) {
  if (denom == 0) return other_empty ? 1.0 : 0.0;
  return static_cast<double>(hits) / static_cast<double>(denom);
}

}  // namespace

PrfScores precision_recall_fscore(const Subset& y_pred, const Subset& y_star) {
  const std::size_t hits = intersection_size(y_pred, y_star);
  PrfScores s;
  s.precision = ratio(hits, y_pred.size(), y_star.empty());
  s.recall = ratio(hits, y_star.size(), y_pred.empty());
  const double sum = s.precision + s.recall;
  s.fscore = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

}  // namespace lmdpp
