#ifndef LMDPP_LEARNING_HPP
#define LMDPP_LEARNING_HPP

#include "lmdpp/gradients.hpp"
#include "lmdpp/kernel.hpp"
#include "lmdpp/metrics.hpp"
#include "lmdpp/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lmdpp {

enum class StepDecay { inv_sqrt, constant };

std::string to_string(StepDecay d);
StepDecay step_decay_from_string(const std::string& s);

struct TrainConfig {
  double lambda = 0.0;  ///< weight of the margin term; 0 is maximum likelihood
  LossWeights omega;
  int max_outer_iterations = 60;
  double step_size = 0.5;
  StepDecay step_decay = StepDecay::inv_sqrt;
  double rel_tolerance = 1e-6;
  std::uint64_t seed = 0;
  int alternation_block = 5;
  double theta_l2 = 0.0;  ///< optional 0.5 * c * ||theta||^2 penalty
  double max_update_norm = 1.0;  ///< cap on ||step * gradient|| per block step
  bool learn_theta = true;
  bool learn_kernel_weights = true;

  void validate() const;
};

struct TrainResult {
  ModelParams params;
  /// Objective after each outer iteration, singular labels counted by their
  /// margin term only.
  std::vector<double> objective_trace;
  double initial_objective = 0.0;
  double final_objective = 0.0;  ///< objective of `params`
  bool converged = false;
  int iterations_used = 0;
  /// Labels whose L_y* is singular; they are trained on the margin term only.
  int degenerate_labels = 0;
};

/// Gradient with respect to (theta, kernel_weights).
struct ParamGradient {
  Vector theta;
  Vector kernel_weights;
};

/// An instance with its base Gram matrices precomputed for one similarity model.
struct PreparedInstance {
  Matrix quality_features;
  std::vector<Matrix> grams;
  Subset label;

  Index n_items() const { return quality_features.rows(); }
};

PreparedInstance prepare_instance(const GroundSetInstance& instance,
                                  const SimilarityConfig& similarity);

/// Builds L for a prepared instance. Kernel weights are not required to be on
/// the simplex here so finite differences can step off it.
EnsembleKernel<double> build_kernel(const PreparedInstance& instance, const ModelParams& params);

/// L_y* counts as singular when the smallest eigenvalue of S_y* is at or below
/// this fraction of the largest. Qualities only rescale rows and columns, so
/// the test does not depend on theta.
inline constexpr double kLabelRankTolerance = 1e-12;

struct InstanceEvaluation {
  double value = 0.0;       ///< [ -log P + lambda * log A ]_+
  double log_likelihood = 0.0;
  double margin_term = 0.0;  ///< log A, or -inf
  bool hinge_active = false;
  bool degenerate_label = false;  ///< L_y* is singular, log P = -inf
  ParamGradient gradient;    ///< empty unless requested
};

struct EvaluationOptions {
  bool with_gradient = false;
  /// For a singular label, drop the infinite -log P term: value is lambda * log A
  /// (0 if that is -inf) and the gradient is the margin term's alone. Otherwise
  /// the value is +inf and the gradient zero.
  bool tolerate_singular_label = false;
};

InstanceEvaluation evaluate_instance(const PreparedInstance& instance, const ModelParams& params,
                                     const TrainConfig& config, EvaluationOptions options = {});

/// [ -log P(y_n; L_n) + lambda * log A ]_+; +inf if the label is singular under params.
double instance_objective(const ModelParams& params, const GroundSetInstance& instance,
                          const SimilarityConfig& similarity, const TrainConfig& config);

/// Sum of instance objectives plus the optional theta penalty.
double total_objective(const ModelParams& params, const std::vector<GroundSetInstance>& dataset,
                       const SimilarityConfig& similarity, const TrainConfig& config);

/// Chains an upstream dObjective/dL to (theta, kernel weights):
/// d/dtheta_k = 1^T (G o L o (X e_k 1^T + 1 e_k^T X^T)) 1 and
/// d/dw_k = 1^T (G o q q^T o S^k) 1.
ParamGradient chain_L_to_params(const PreparedInstance& instance, const ModelParams& params,
                                const Matrix& upstream);
ParamGradient chain_L_to_params(const GroundSetInstance& instance,
                                const SimilarityConfig& similarity, const ModelParams& params,
                                const Matrix& upstream);

/// Euclidean projection onto {w >= 0, sum w = 1}.
Vector project_to_simplex(const Vector& v);

/// Block-alternating projected subgradient descent on total_objective.
TrainResult train(const std::vector<GroundSetInstance>& dataset,
                  const SimilarityConfig& similarity, const TrainConfig& config,
                  std::optional<ModelParams> initial = std::nullopt);

Vector flatten(const ModelParams& params);
ModelParams unflatten(const Vector& flat, Index quality_dim);

struct FiniteDifferenceReport {
  std::vector<double> analytic;
  std::vector<double> numeric;
  std::vector<double> relative_errors;
  double max_relative_error = 0.0;
  bool passed = false;
};

/// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h against `analytic`.
/// Relative error uses max(|analytic|, |numeric|, 1e-8) as denominator.
FiniteDifferenceReport finite_difference_check(const std::function<double(const Vector&)>& f,
                                               const Vector& point, const Vector& analytic,
                                               double step = 1e-5, double tolerance = 1e-5);

}  // namespace lmdpp

#endif  // LMDPP_LEARNING_HPP
