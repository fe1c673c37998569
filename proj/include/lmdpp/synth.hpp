#ifndef LMDPP_SYNTH_HPP
#define LMDPP_SYNTH_HPP

#include "lmdpp/model.hpp"
#include "lmdpp/random.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lmdpp {

struct SynthConfig {
  int n_items = 10;
  int feature_dim = 5;
  double noise_prob = 0.1;
  int n_train = 200;
  int n_holdout = 100;
  int n_test = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Split : int { train = 0, holdout = 1, test = 2 };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct SynthDataset {
  Vector true_theta;
  std::array<std::vector<GroundSetInstance>, 3> splits;
  /// Noise-free exhaustive MAP label of each instance, before perturbation.
  std::array<std::vector<Subset>, 3> provenance;

  const std::vector<GroundSetInstance>& split(Split s) const {
    return splits[static_cast<std::size_t>(s)];
  }
  const std::vector<Subset>& noiseless(Split s) const {
    return provenance[static_cast<std::size_t>(s)];
  }
};

/// Synthetic ground sets with a shared true theta and linear similarity.
///
/// Randomness, with rng(seed) = CounterRng(config.seed):
///   theta:    stream 0 of rng, feature_dim normals.
///   instance: stream 1 + split * 2^32 + index (split: train 0, holdout 1,
///             test 2). Draws, in order: n_items * feature_dim normals for x
///             (row-major, item by item), one uniform coin, and if
///             coin < noise_prob one below(n_items) item whose membership is
///             flipped.
/// Features serve as both quality and similarity features (phi_i = x_i).
SynthDataset generate_dataset(const SynthConfig& config);

/// One instance of the protocol above, from its own stream.
GroundSetInstance generate_instance(const Vector& true_theta, const SynthConfig& config,
                                    CounterRng rng, Subset* noiseless_label = nullptr);

/// exp(-||x_i - x_j||^2 / sigma^2) over the similarity features.
Matrix misspecified_similarity(const GroundSetInstance& instance, double sigma);

}  // namespace lmdpp

#endif  // LMDPP_SYNTH_HPP
