#include "lmdpp/synth.hpp"

#include "lmdpp/inference.hpp"
#include "lmdpp/kernel.hpp"

#include <cmath>
#include <string>

namespace lmdpp {

void SynthConfig::validate() const {
  if (n_items < 1 || feature_dim < 1) throw DomainError("n_items and feature_dim must be positive");
  if (n_items > 20)
    throw DomainError("synthetic labels need exhaustive MAP; n_items must be <= 20, got " +
                      std::to_string(n_items));
  if (!(noise_prob >= 0.0 && noise_prob <= 1.0)) throw DomainError("noise_prob must be in [0, 1]");
  if (n_train < 1 || n_holdout < 1 || n_test < 1)
    throw DomainError("split sizes must be positive");
}

std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::holdout: return "holdout";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "holdout") return Split::holdout;
  if (s == "test") return Split::test;
  throw DataError("unknown split '" + s + "'");
}

GroundSetInstance generate_instance(const Vector& true_theta, const SynthConfig& config,
                                    CounterRng rng, Subset* noiseless_label) {
  const Index n = config.n_items;
  const Index d = config.feature_dim;
  Matrix x(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < d; ++k) x(i, k) = rng.normal();

  const Vector q = (x * true_theta).array().exp().matrix();
  const Matrix s = x * x.transpose();
  const Subset map = map_exhaustive(assemble_L(q, s), config.n_items);

  std::vector<Index> label(map.begin(), map.end());
  if (rng.uniform() < config.noise_prob) {
    const auto item = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    if (map.contains(item))
      std::erase(label, item);
    else
      label.push_back(item);
  }
  if (noiseless_label) *noiseless_label = map;
  return GroundSetInstance(x, x, Subset(std::move(label)));
}

SynthDataset generate_dataset(const SynthConfig& config) {
  config.validate();
  const CounterRng root(config.seed);
  SynthDataset data;
  CounterRng theta_rng = root.substream(0);
  data.true_theta.resize(config.feature_dim);
  for (Index k = 0; k < config.feature_dim; ++k) data.true_theta(k) = theta_rng.normal();

  const std::array<int, 3> sizes{config.n_train, config.n_holdout, config.n_test};
  for (std::size_t split = 0; split < 3; ++split) {
    auto& instances = data.splits[split];
    auto& provenance = data.provenance[split];
    instances.reserve(static_cast<std::size_t>(sizes[split]));
    for (int index = 0; index < sizes[split]; ++index) {
      const std::uint64_t stream =
          1 + (static_cast<std::uint64_t>(split) << 32) + static_cast<std::uint64_t>(index);
      Subset noiseless;
      instances.push_back(generate_instance(data.true_theta, config, root.substream(stream), &noiseless));
      provenance.push_back(std::move(noiseless));
    }
  }
  return data;
}

Matrix misspecified_similarity(const GroundSetInstance& instance, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  return rbf_gram(squared_distances(instance.similarity_features), sigma);
}

}  // namespace lmdpp
