#ifndef LMDPP_INFERENCE_HPP
#define LMDPP_INFERENCE_HPP

#include "lmdpp/kernel.hpp"
#include "lmdpp/metrics.hpp"
#include "lmdpp/random.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lmdpp {

enum class InferenceMode { exhaustive, mbr };

std::string to_string(InferenceMode m);
InferenceMode inference_mode_from_string(const std::string& s);

struct InferenceConfig {
  InferenceMode mode = InferenceMode::exhaustive;
  int exhaustive_limit = 20;
  int mbr_samples = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

inline constexpr int kMaxExhaustiveItems = 25;

/// argmax_y det(L_y) over all 2^N subsets; ties go to the smaller subset, then
/// the lexicographically smaller one. Throws DomainError when N > limit.
Subset map_exhaustive(const EnsembleKernel<double>& l, int exhaustive_limit = 20);

/// Exact DPP sample by the spectral method: keep eigenvector m with probability
/// lambda_m / (lambda_m + 1), then draw items one at a time from the projection
/// measure of the kept subspace.
Subset sample_dpp(const EnsembleKernel<double>& l, CounterRng& rng);

/// Consensus score of each candidate: (1/T) sum_t metric(candidate, sample_t).
using ConsensusMetric = std::function<double(const Subset&, const Subset&)>;

struct MbrResult {
  Subset decoded;
  double consensus = 0.0;
  std::vector<Subset> samples;
};

/// The sample with the highest mean F-score against all samples (itself
/// included); ties go to the first occurrence.
MbrResult mbr_decode_with_samples(const EnsembleKernel<double>& l, const InferenceConfig& config,
                                  CounterRng& rng, const ConsensusMetric& metric = fscore);

Subset mbr_decode(const EnsembleKernel<double>& l, const InferenceConfig& config, CounterRng& rng);

/// argmax over `candidates` of the mean metric against all of them.
std::size_t consensus_argmax(const std::vector<Subset>& candidates, const ConsensusMetric& metric,
                             double* best_score = nullptr);

/// Dispatches on config.mode; MBR draws use `rng`.
Subset predict_subset(const EnsembleKernel<double>& l, const InferenceConfig& config,
                      CounterRng& rng);

}  // namespace lmdpp

#endif  // LMDPP_INFERENCE_HPP
