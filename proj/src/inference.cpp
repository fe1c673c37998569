#include "lmdpp/inference.hpp"

#include <Eigen/Cholesky>

#include <bit>
#include <cmath>
#include <map>

namespace lmdpp {

std::string to_string(InferenceMode m) {
  return m == InferenceMode::exhaustive ? "exhaustive" : "mbr";
}

InferenceMode inference_mode_from_string(const std::string& s) {
  if (s == "exhaustive") return InferenceMode::exhaustive;
  if (s == "mbr") return InferenceMode::mbr;
  throw DomainError("unknown inference mode '" + s + "' (expected exhaustive or mbr)");
}

void InferenceConfig::validate() const {
  if (mbr_samples < 1) throw DomainError("mbr_samples must be >= 1");
  if (exhaustive_limit < 0 || exhaustive_limit > kMaxExhaustiveItems)
    throw DomainError("exhaustive_limit must be in [0, " + std::to_string(kMaxExhaustiveItems) + "]");
}

namespace {

// log det of the principal submatrix selected by `mask`; -inf when not positive definite.
double masked_log_det(const Matrix& l, std::uint64_t mask, Matrix& buffer,
                      std::vector<Index>& items) {
  items.clear();
  for (Index i = 0; i < l.rows(); ++i)
    if (mask & (std::uint64_t{1} << i)) items.push_back(i);
  const auto k = static_cast<Index>(items.size());
  if (k == 0) return 0.0;
  buffer.resize(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b <= a; ++b) buffer(a, b) = l(items[a], items[b]);
  Eigen::LLT<Eigen::Ref<Matrix>> llt(buffer);
  if (llt.info() != Eigen::Success) return negative_infinity<double>();
  return 2.0 * buffer.diagonal().array().log().sum();
}

bool lexicographically_smaller(std::uint64_t a, std::uint64_t b) {
  // Compare the increasing index lists of two equal-size masks.
  while (a != 0 && b != 0) {
    const auto la = a & (~a + 1);
    const auto lb = b & (~b + 1);
    if (la != lb) return la < lb;
    a ^= la;
    b ^= lb;
  }
  return a == 0 && b != 0;
}

}  // namespace

Subset map_exhaustive(const EnsembleKernel<double>& l, int exhaustive_limit) {
  const Index n = l.size();
  if (n > exhaustive_limit || n > kMaxExhaustiveItems)
    throw DomainError("ground set of " + std::to_string(n) +
                      " items exceeds the exhaustive MAP limit of " +
                      std::to_string(exhaustive_limit) + "; use mbr inference instead");
  Matrix buffer;
  std::vector<Index> items;
  items.reserve(static_cast<std::size_t>(n));
  std::uint64_t best_mask = 0;
  double best = 0.0;  // empty set
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const double value = masked_log_det(l.matrix(), mask, buffer, items);
    if (value < best) continue;
    if (value == best) {
      const int size = std::popcount(mask);
      const int best_size = std::popcount(best_mask);
      if (size > best_size) continue;
      if (size == best_size && !lexicographically_smaller(mask, best_mask)) continue;
    }
    best = value;
    best_mask = mask;
  }
  return Subset::from_mask(best_mask, n);
}

namespace {

// Modified Gram-Schmidt; columns whose residual norm drops below 1e-12 are removed.
Matrix orthonormalize(const Matrix& v) {
  Matrix out(v.rows(), v.cols());
  Index kept = 0;
  for (Index c = 0; c < v.cols(); ++c) {
    Vector col = v.col(c);
    for (Index p = 0; p < kept; ++p) col -= out.col(p).dot(col) * out.col(p);
    const double norm = col.norm();
    if (norm < 1e-12) continue;
    out.col(kept++) = col / norm;
  }
  return out.leftCols(kept);
}

}  // namespace

Subset sample_dpp(const EnsembleKernel<double>& l, CounterRng& rng) {
  const Index n = l.size();
  std::vector<Index> chosen_vectors;
  for (Index m = 0; m < n; ++m) {
    const double lambda = l.eigenvalues()(m);
    if (rng.uniform() < lambda / (lambda + 1.0)) chosen_vectors.push_back(m);
  }
  Matrix v(n, static_cast<Index>(chosen_vectors.size()));
  for (std::size_t c = 0; c < chosen_vectors.size(); ++c)
    v.col(static_cast<Index>(c)) = l.eigenvectors().col(chosen_vectors[c]);

  std::vector<Index> items;
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  while (v.cols() > 0) {
    Vector weights = v.rowwise().squaredNorm();
    for (Index i = 0; i < n; ++i)
      if (taken[static_cast<std::size_t>(i)]) weights(i) = 0.0;
    const double total = weights.sum();
    if (total < 1e-12) break;
    const double target = rng.uniform() * total;
    Index item = -1;
    double cumulative = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (weights(i) <= 0.0) continue;
      cumulative += weights(i);
      item = i;
      if (target < cumulative) break;
    }
    items.push_back(item);
    taken[static_cast<std::size_t>(item)] = true;

    // Restrict the subspace to vectors orthogonal to e_item.
    Index pivot = 0;
    v.row(item).cwiseAbs().maxCoeff(&pivot);
    const Vector pivot_col = v.col(pivot);
    const double pivot_value = v(item, pivot);
    Matrix reduced(n, v.cols() - 1);
    for (Index c = 0, r = 0; c < v.cols(); ++c) {
      if (c == pivot) continue;
      reduced.col(r++) = v.col(c) - pivot_col * (v(item, c) / pivot_value);
    }
    v = orthonormalize(reduced);
  }
  return Subset(std::move(items));
}

std::size_t consensus_argmax(const std::vector<Subset>& candidates, const ConsensusMetric& metric,
                             double* best_score) {
  if (candidates.empty()) throw DomainError("consensus over an empty candidate list");
  // Identical candidates share a score, so score each distinct subset once.
  std::map<Subset, std::size_t> first_index;
  std::vector<std::size_t> unique;
  std::vector<double> multiplicity;
  for (std::size_t t = 0; t < candidates.size(); ++t) {
    auto [it, inserted] = first_index.try_emplace(candidates[t], unique.size());
    if (inserted) {
      unique.push_back(t);
      multiplicity.push_back(1.0);
    } else {
      multiplicity[it->second] += 1.0;
    }
  }
  const double inv_t = 1.0 / static_cast<double>(candidates.size());
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t u = 0; u < unique.size(); ++u) {
    double score = 0.0;
    for (std::size_t w = 0; w < unique.size(); ++w)
      score += multiplicity[w] * metric(candidates[unique[u]], candidates[unique[w]]);
    score *= inv_t;
    if (score > best_value) {
      best_value = score;
      best = unique[u];
    }
  }
  if (best_score) *best_score = best_value;
  return best;
}

MbrResult mbr_decode_with_samples(const EnsembleKernel<double>& l, const InferenceConfig& config,
                                  CounterRng& rng, const ConsensusMetric& metric) {
  config.validate();
  MbrResult result;
  result.samples.reserve(static_cast<std::size_t>(config.mbr_samples));
  // One draw from `rng` keys this decode; sample t uses its own substream.
  const CounterRng base = rng.substream(rng());
  for (int t = 0; t < config.mbr_samples; ++t) {
    CounterRng draw = base.substream(static_cast<std::uint64_t>(t));
    result.samples.push_back(sample_dpp(l, draw));
  }
  const std::size_t best = consensus_argmax(result.samples, metric, &result.consensus);
  result.decoded = result.samples[best];
  return result;
}

Subset mbr_decode(const EnsembleKernel<double>& l, const InferenceConfig& config, CounterRng& rng) {
  return mbr_decode_with_samples(l, config, rng).decoded;
}

Subset predict_subset(const EnsembleKernel<double>& l, const InferenceConfig& config,
                      CounterRng& rng) {
  if (config.mode == InferenceMode::exhaustive && l.size() <= config.exhaustive_limit)
    return map_exhaustive(l, config.exhaustive_limit);
  return mbr_decode(l, config, rng);
}

}  // namespace lmdpp
