#include "lmdpp/model.hpp"

#include <cmath>
#include <string>

namespace lmdpp {

GroundSetInstance::GroundSetInstance(Matrix quality, Matrix similarity,
                                     std::optional<Subset> label_)
    : quality_features(std::move(quality)),
      similarity_features(std::move(similarity)),
      label(std::move(label_)) {
  validate();
}

void GroundSetInstance::validate() const {
  if (quality_features.rows() == 0) throw DimensionError("ground set has no items");
  if (similarity_features.rows() != quality_features.rows())
    throw DimensionError("quality features describe " + std::to_string(quality_features.rows()) +
                         " items but similarity features describe " +
                         std::to_string(similarity_features.rows()));
  if (label) label->check_range(n_items());
}

const Subset& GroundSetInstance::require_label() const {
  if (!label) throw DataError("instance has no label");
  return *label;
}

void SimilarityConfig::validate() const {
  for (double s : bandwidths)
    if (!(s > 0.0) || !std::isfinite(s))
      throw DomainError("RBF bandwidths must be positive, got " + std::to_string(s));
  if (num_weights() == 0) throw DomainError("similarity model has no base kernels");
}

ModelParams ModelParams::initial(Index quality_dim, const SimilarityConfig& similarity) {
  similarity.validate();
  const Index k = similarity.num_weights();
  return {Vector::Zero(quality_dim), Vector::Constant(k, 1.0 / static_cast<double>(k))};
}

double ModelParams::beta(const SimilarityConfig& similarity) const {
  return similarity.include_linear ? kernel_weights(kernel_weights.size() - 1) : 0.0;
}

bool on_simplex(const Vector& weights, double tolerance) {
  if (weights.size() == 0) return false;
  if ((weights.array() < -tolerance).any()) return false;
  return std::abs(weights.sum() - 1.0) <= tolerance;
}

Matrix squared_distances(const Matrix& features) {
  const Index n = features.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = (features.row(i) - features.row(j)).squaredNorm();
  return d;
}

Matrix rbf_gram(const Matrix& squared_dist, double sigma) {
  return (-squared_dist.array() / (sigma * sigma)).exp().matrix();
}

std::vector<Matrix> base_similarity_grams(const GroundSetInstance& instance,
                                          const SimilarityConfig& similarity) {
  similarity.validate();
  std::vector<Matrix> grams;
  grams.reserve(static_cast<std::size_t>(similarity.num_weights()));
  if (!similarity.bandwidths.empty()) {
    const Matrix dist = squared_distances(instance.similarity_features);
    for (double sigma : similarity.bandwidths) grams.push_back(rbf_gram(dist, sigma));
  }
  if (similarity.include_linear)
    grams.push_back(instance.similarity_features * instance.similarity_features.transpose());
  return grams;
}

Matrix build_similarity_matrix(const GroundSetInstance& instance,
                               const SimilarityConfig& similarity, const Vector& weights) {
  if (weights.size() != similarity.num_weights())
    throw DimensionError("expected " + std::to_string(similarity.num_weights()) +
                         " kernel weights, got " + std::to_string(weights.size()));
  if (!on_simplex(weights)) throw DomainError("kernel weights must lie on the probability simplex");
  const auto grams = base_similarity_grams(instance, similarity);
  Matrix s = Matrix::Zero(instance.n_items(), instance.n_items());
  for (std::size_t k = 0; k < grams.size(); ++k) s += weights(static_cast<Index>(k)) * grams[k];
  return s;
}

Vector build_quality_vector(const GroundSetInstance& instance, const Vector& theta) {
  if (theta.size() != instance.quality_dim())
    throw DimensionError("theta has dimension " + std::to_string(theta.size()) +
                         " but quality features have dimension " +
                         std::to_string(instance.quality_dim()));
  return (instance.quality_features * theta).array().exp().matrix();
}

}  // namespace lmdpp
