#ifndef LMDPP_HARNESS_HPP
#define LMDPP_HARNESS_HPP

#include "lmdpp/config.hpp"
#include "lmdpp/inference.hpp"
#include "lmdpp/learning.hpp"
#include "lmdpp/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lmdpp {

enum class ExperimentKind { fig1a, fig1b, fig1c, omega_sweep, custom };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Everything one experiment run needs. Grids left empty get per-kind defaults
/// in experiment_spec_from_config.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::custom;
  std::uint64_t seed = 0;
  int replicates = 10;
  SynthConfig synth;
  TrainConfig train;
  InferenceConfig inference;
  std::vector<int> train_sizes;        // fig1a, fig1c
  std::vector<double> sigmas;          // fig1b
  std::vector<double> mkl_bandwidths;  // fig1c
  std::vector<double> lambda_grid;     // LME hyperparameter search
  std::vector<double> omega_grid;      // omega_sweep values; LME search otherwise
  bool include_oracle = true;
  /// omega_sweep similarity: "mkl" (RBF grid over mkl_bandwidths, weights
  /// learned) or "true" (the generating linear kernel, fixed).
  std::string sweep_similarity = "mkl";

  void validate() const;
};

/// Reads an ExperimentSpec from flat config keys; throws DataError on unknown keys.
ExperimentSpec experiment_spec_from_config(const ConfigMap& config);
/// Normalized `key = value` text of every setting (the config echo).
std::string experiment_spec_to_config(const ExperimentSpec& spec);

SynthConfig synth_config_from(const ConfigMap& config, SynthConfig base = {});
TrainConfig train_config_from(const ConfigMap& config, TrainConfig base = {});
InferenceConfig inference_config_from(const ConfigMap& config, InferenceConfig base = {});
SimilarityConfig similarity_config_from(const ConfigMap& config);

/// One (cell, replicate) result. `param_name` names the swept quantity
/// (train_size, sigma, omega).
struct ResultRow {
  std::string experiment;
  int replicate = 0;
  std::string method;      // mle | lme | oracle
  std::string similarity;  // true | rbf | mkl
  std::string param_name;
  double param_value = 0.0;
  double lambda = 0.0;
  double omega = 1.0;
  PrfScores scores;
  int iterations = 0;
  double runtime_seconds = 0.0;  // written only to timings.csv
};

struct SummaryRow {
  std::string experiment;
  std::string method;
  std::string similarity;
  std::string param_name;
  double param_value = 0.0;
  int count = 0;
  PrfScores mean;
  PrfScores stderr_;  ///< sample standard deviation / sqrt(count)
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<PrPoint> pr_curve;  // omega_sweep only

  /// Throws DomainError if the cell is absent.
  const SummaryRow& cell(const std::string& method, const std::string& similarity,
                         double param_value) const;
};

/// Mean test scores of `params` with the configured inference. MBR draws for
/// instance i use rng.substream(i).
PrfScores evaluate_model(const std::vector<GroundSetInstance>& instances,
                         const SimilarityConfig& similarity, const ModelParams& params,
                         const InferenceConfig& inference, const CounterRng& rng);

struct GridCell {
  double lambda = 0.0;
  double omega = 1.0;
  PrfScores holdout;
};

struct GridSearchResult {
  TrainConfig best;
  TrainResult best_result;
  std::vector<GridCell> cells;
};

/// Trains one model per (lambda, omega) cell on `train`, scores holdout
/// F-score, and keeps the best; ties go to the smaller lambda, then to the
/// omega closer to 1 (in log scale).
GridSearchResult grid_search(const std::vector<GroundSetInstance>& train,
                             const std::vector<GroundSetInstance>& holdout,
                             const SimilarityConfig& similarity, const TrainConfig& base,
                             const std::vector<double>& lambda_grid,
                             const std::vector<double>& omega_grid,
                             const InferenceConfig& inference, const CounterRng& rng);

ExperimentResult run_fig1a(const ExperimentSpec& spec);
ExperimentResult run_fig1b(const ExperimentSpec& spec);
ExperimentResult run_fig1c(const ExperimentSpec& spec);
ExperimentResult run_omega_sweep(const ExperimentSpec& spec);
ExperimentResult run_custom(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Mean and standard error per (method, similarity, param) in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Piecewise-linear precision-recall curve through the points sorted by
/// recall, sampled at `samples` evenly spaced recall values.
std::vector<PrPoint> interpolate_pr_curve(std::vector<PrPoint> points, int samples = 51);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string summary_to_csv(const std::vector<SummaryRow>& summary);
std::string pr_curve_to_csv(const std::vector<PrPoint>& curve);

/// Writes config.cfg, rows.csv, summary.csv, pr_curve.csv (omega_sweep) and
/// manifest.json into `out_dir`; timings.csv too when `with_timings`.
void write_experiment_outputs(const ExperimentResult& result, const ExperimentSpec& spec,
                              const std::filesystem::path& out_dir, bool with_timings = false);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lmdpp

#endif  // LMDPP_HARNESS_HPP
