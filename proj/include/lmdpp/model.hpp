#ifndef LMDPP_MODEL_HPP
#define LMDPP_MODEL_HPP

#include "lmdpp/common.hpp"
#include "lmdpp/subset.hpp"

#include <optional>
#include <vector>

namespace lmdpp {

/// One ground set: per-item quality features x_i (rows of `quality_features`),
/// similarity features phi_i (rows of `similarity_features`) and an optional label.
struct GroundSetInstance {
  Matrix quality_features;
  Matrix similarity_features;
  std::optional<Subset> label;

  GroundSetInstance() = default;
  /// Validates row counts and label range; throws DimensionError / DomainError.
  GroundSetInstance(Matrix quality, Matrix similarity, std::optional<Subset> label = std::nullopt);

  Index n_items() const { return quality_features.rows(); }
  Index quality_dim() const { return quality_features.cols(); }
  Index similarity_dim() const { return similarity_features.cols(); }

  const Subset& require_label() const;
  void validate() const;
};

/// Base kernels of the similarity model: one RBF kernel per bandwidth,
/// optionally followed by the linear kernel phi_i^T phi_j.
struct SimilarityConfig {
  std::vector<double> bandwidths;
  bool include_linear = false;

  Index num_weights() const {
    return static_cast<Index>(bandwidths.size()) + (include_linear ? 1 : 0);
  }
  void validate() const;

  static SimilarityConfig linear() { return {{}, true}; }
  static SimilarityConfig rbf(std::vector<double> sigmas) { return {std::move(sigmas), false}; }
};

/// Learnable parameters: quality weights theta and the simplex-constrained
/// kernel weights (alpha_1..alpha_K, beta).
struct ModelParams {
  Vector theta;
  Vector kernel_weights;

  /// theta = 0, uniform kernel weights.
  static ModelParams initial(Index quality_dim, const SimilarityConfig& similarity);

  /// Weight of the linear kernel, or 0 when the configuration has none.
  double beta(const SimilarityConfig& similarity) const;
};

inline constexpr double kSimplexTolerance = 1e-9;

bool on_simplex(const Vector& weights, double tolerance = kSimplexTolerance);

/// The unweighted base Gram matrices S^k in the order of SimilarityConfig.
std::vector<Matrix> base_similarity_grams(const GroundSetInstance& instance,
                                          const SimilarityConfig& similarity);

/// Pairwise squared Euclidean distances between rows of `features`.
Matrix squared_distances(const Matrix& features);

/// Gaussian RBF Gram matrix exp(-||phi_i - phi_j||^2 / sigma^2).
Matrix rbf_gram(const Matrix& squared_dist, double sigma);

/// S = sum_k alpha_k exp(-||phi_i - phi_j||^2 / sigma_k^2) + beta phi_i^T phi_j.
Matrix build_similarity_matrix(const GroundSetInstance& instance,
                               const SimilarityConfig& similarity, const Vector& weights);

/// q_i = exp(theta^T x_i).
Vector build_quality_vector(const GroundSetInstance& instance, const Vector& theta);

}  // namespace lmdpp

#endif  // LMDPP_MODEL_HPP
