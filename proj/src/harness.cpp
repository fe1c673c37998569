#include "lmdpp/harness.hpp"

#include "lmdpp/io.hpp"

#include <Eigen/Core>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

namespace lmdpp {

namespace {

std::vector<double> power_grid(int q_first, int q_last, int q_step) {
  std::vector<double> grid;
  for (int q = q_first; q <= q_last; q += q_step) grid.push_back(std::ldexp(1.0, q));
  return grid;
}

const std::vector<double> kDefaultLambdaGrid = {0.0, 0.01, 0.1, 1.0, 10.0};
const std::vector<int> kDefaultTrainSizes = {100, 200, 400, 800};

// Independent dataset seed per replicate.
std::uint64_t replicate_seed(std::uint64_t seed, int replicate) {
  return CounterRng(seed, 0x5eedULL).substream(static_cast<std::uint64_t>(replicate))();
}

CounterRng inference_rng(std::uint64_t data_seed) { return CounterRng(data_seed, 0x1f1fULL); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<GroundSetInstance> prefix(const std::vector<GroundSetInstance>& v, int n) {
  return {v.begin(), v.begin() + std::min<std::ptrdiff_t>(n, static_cast<std::ptrdiff_t>(v.size()))};
}

SynthDataset replicate_dataset(const ExperimentSpec& spec, int replicate, int n_train) {
  SynthConfig synth = spec.synth;
  synth.seed = replicate_seed(spec.seed, replicate);
  synth.n_train = n_train;
  return generate_dataset(synth);
}

ResultRow make_row(const ExperimentSpec& spec, int replicate, std::string method,
                   std::string similarity, std::string param_name, double param_value) {
  ResultRow row;
  row.experiment = to_string(spec.kind);
  row.replicate = replicate;
  row.method = std::move(method);
  row.similarity = std::move(similarity);
  row.param_name = std::move(param_name);
  row.param_value = param_value;
  return row;
}

struct Fit {
  TrainResult result;
  double lambda = 0.0;
  double omega = 1.0;
};

Fit fit_mle(const std::vector<GroundSetInstance>& train_set, const SimilarityConfig& similarity,
            const TrainConfig& base) {
  TrainConfig config = base;
  config.lambda = 0.0;
  config.omega = LossWeights(1.0);
  return {lmdpp::train(train_set, similarity, config), 0.0, 1.0};
}

Fit fit_lme(const SynthDataset& data, const std::vector<GroundSetInstance>& train_set,
            const SimilarityConfig& similarity, const ExperimentSpec& spec,
            const TrainConfig& base, const CounterRng& rng) {
  GridSearchResult search = grid_search(train_set, data.split(Split::holdout), similarity, base,
                                        spec.lambda_grid, spec.omega_grid, spec.inference, rng);
  return {std::move(search.best_result), search.best.lambda, search.best.omega.omega};
}

void score_fit(ResultRow& row, const Fit& fit, const SynthDataset& data,
               const SimilarityConfig& similarity, const ExperimentSpec& spec,
               const CounterRng& rng) {
  row.lambda = fit.lambda;
  row.omega = fit.omega;
  row.iterations = fit.result.iterations_used;
  row.scores = evaluate_model(data.split(Split::test), similarity, fit.result.params,
                              spec.inference, rng.substream(1));
}

ResultRow oracle_row(const ExperimentSpec& spec, int replicate, const SynthDataset& data,
                     const std::string& param_name, double param_value, const CounterRng& rng) {
  ResultRow row = make_row(spec, replicate, "oracle", "true", param_name, param_value);
  const auto start = std::chrono::steady_clock::now();
  const SimilarityConfig linear = SimilarityConfig::linear();
  ModelParams truth{data.true_theta, Vector::Ones(1)};
  row.scores = evaluate_model(data.split(Split::test), linear, truth, spec.inference,
                              rng.substream(1));
  row.runtime_seconds = seconds_since(start);
  return row;
}

template <typename Fn>
ResultRow timed_row(ResultRow row, Fn&& body) {
  const auto start = std::chrono::steady_clock::now();
  body(row);
  row.runtime_seconds = seconds_since(start);
  return row;
}

ExperimentResult finish(std::vector<ResultRow> rows) {
  ExperimentResult result;
  result.summary = summarize(rows);
  result.rows = std::move(rows);
  return result;
}

void require_kind(const ExperimentSpec& spec, ExperimentKind kind) {
  spec.validate();
  if (spec.kind != kind)
    throw DomainError("experiment kind is " + to_string(spec.kind) + ", expected " +
                      to_string(kind));
}

double log_distance_to_one(double omega) { return std::abs(std::log(omega)); }

std::string csv_scores(const PrfScores& s) {
  return format_double(s.precision) + "," + format_double(s.recall) + "," + format_double(s.fscore);
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::fig1a: return "fig1a";
    case ExperimentKind::fig1b: return "fig1b";
    case ExperimentKind::fig1c: return "fig1c";
    case ExperimentKind::omega_sweep: return "omega_sweep";
    case ExperimentKind::custom: return "custom";
  }
  return "custom";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::fig1a, ExperimentKind::fig1b, ExperimentKind::fig1c,
                 ExperimentKind::omega_sweep, ExperimentKind::custom})
    if (to_string(k) == s) return k;
  throw DataError("unknown experiment kind '" + s + "'");
}

void ExperimentSpec::validate() const {
  if (replicates < 1) throw DomainError("replicates must be at least 1");
  synth.validate();
  train.validate();
  inference.validate();
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
  };
  if (lambda_grid.empty() || omega_grid.empty())
    throw DomainError("lambda and omega grids must be non-empty");
  if (std::any_of(lambda_grid.begin(), lambda_grid.end(),
                  [](double x) { return !(x >= 0.0) || !std::isfinite(x); }))
    throw DomainError("lambda grid values must be finite and nonnegative");
  if (!positive(omega_grid)) throw DomainError("omega grid values must be positive");
  switch (kind) {
    case ExperimentKind::fig1a:
    case ExperimentKind::fig1c:
      if (train_sizes.empty()) throw DomainError("train_sizes must be non-empty");
      if (std::any_of(train_sizes.begin(), train_sizes.end(), [](int n) { return n < 1; }))
        throw DomainError("train sizes must be positive");
      if (kind == ExperimentKind::fig1c && (mkl_bandwidths.empty() || !positive(mkl_bandwidths)))
        throw DomainError("mkl_bandwidths must be non-empty and positive");
      break;
    case ExperimentKind::fig1b:
      if (sigmas.empty() || !positive(sigmas)) throw DomainError("sigmas must be non-empty and positive");
      break;
    case ExperimentKind::omega_sweep:
      if (train.lambda <= 0.0) throw DomainError("omega_sweep needs lambda > 0");
      if (sweep_similarity != "mkl" && sweep_similarity != "true")
        throw DomainError("sweep_similarity must be mkl or true");
      if (sweep_similarity == "mkl" && (mkl_bandwidths.empty() || !positive(mkl_bandwidths)))
        throw DomainError("mkl_bandwidths must be non-empty and positive");
      break;
    case ExperimentKind::custom: break;
  }
}

SynthConfig synth_config_from(const ConfigMap& c, SynthConfig s) {
  s.n_items = c.get_int("n_items", s.n_items);
  s.feature_dim = c.get_int("feature_dim", s.feature_dim);
  s.noise_prob = c.get_double("noise_prob", s.noise_prob);
  s.n_train = c.get_int("n_train", s.n_train);
  s.n_holdout = c.get_int("n_holdout", s.n_holdout);
  s.n_test = c.get_int("n_test", s.n_test);
  s.seed = c.get_uint64("seed", s.seed);
  return s;
}

TrainConfig train_config_from(const ConfigMap& c, TrainConfig t) {
  t.lambda = c.get_double("lambda", t.lambda);
  t.omega = LossWeights(c.get_double("omega", t.omega.omega));
  t.max_outer_iterations = c.get_int("max_outer_iterations", t.max_outer_iterations);
  t.step_size = c.get_double("step_size", t.step_size);
  t.step_decay = step_decay_from_string(c.get_string("step_decay", to_string(t.step_decay)));
  t.rel_tolerance = c.get_double("rel_tolerance", t.rel_tolerance);
  t.seed = c.get_uint64("seed", t.seed);
  t.alternation_block = c.get_int("alternation_block", t.alternation_block);
  t.theta_l2 = c.get_double("theta_l2", t.theta_l2);
  t.max_update_norm = c.get_double("max_update_norm", t.max_update_norm);
  t.learn_theta = c.get_bool("learn_theta", t.learn_theta);
  t.learn_kernel_weights = c.get_bool("learn_kernel_weights", t.learn_kernel_weights);
  return t;
}

InferenceConfig inference_config_from(const ConfigMap& c, InferenceConfig i) {
  i.mode = inference_mode_from_string(c.get_string("inference_mode", to_string(i.mode)));
  i.exhaustive_limit = c.get_int("exhaustive_limit", i.exhaustive_limit);
  i.mbr_samples = c.get_int("mbr_samples", i.mbr_samples);
  i.seed = c.get_uint64("seed", i.seed);
  return i;
}

SimilarityConfig similarity_config_from(const ConfigMap& c) {
  SimilarityConfig s;
  s.bandwidths = c.get_doubles("similarity_bandwidths", {});
  s.include_linear = c.get_bool("similarity_linear", s.bandwidths.empty());
  s.validate();
  return s;
}

ExperimentSpec experiment_spec_from_config(const ConfigMap& c) {
  ExperimentSpec spec;
  spec.kind = experiment_kind_from_string(c.get_string("kind", "custom"));
  spec.seed = c.get_uint64("seed", 0);
  spec.replicates = c.get_int("replicates", 10);
  spec.synth = synth_config_from(c);
  TrainConfig base;
  if (spec.kind == ExperimentKind::omega_sweep) base.lambda = 1.0;
  spec.train = train_config_from(c, base);
  spec.inference = inference_config_from(c);
  spec.train_sizes = c.get_ints("train_sizes", kDefaultTrainSizes);
  spec.sigmas = c.get_doubles("sigmas", power_grid(-3, 6, 1));
  spec.mkl_bandwidths = c.get_doubles("mkl_bandwidths", power_grid(-3, 6, 1));
  spec.lambda_grid = c.get_doubles("lambda_grid", kDefaultLambdaGrid);
  // The figure experiments use the plain Hamming loss; the sweep spans omega.
  spec.omega_grid = c.get_doubles(
      "omega_grid", spec.kind == ExperimentKind::omega_sweep ? power_grid(-6, 8, 2)
                                                             : std::vector<double>{1.0});
  spec.include_oracle = c.get_bool("include_oracle", true);
  spec.sweep_similarity = c.get_string("sweep_similarity", spec.sweep_similarity);
  c.check_all_used();
  spec.validate();
  return spec;
}

std::string experiment_spec_to_config(const ExperimentSpec& s) {
  std::string out;
  auto put = [&](const char* key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  auto boolean = [](bool b) { return std::string(b ? "true" : "false"); };
  put("kind", to_string(s.kind));
  put("seed", std::to_string(s.seed));
  put("replicates", std::to_string(s.replicates));
  put("n_items", std::to_string(s.synth.n_items));
  put("feature_dim", std::to_string(s.synth.feature_dim));
  put("noise_prob", format_double(s.synth.noise_prob));
  put("n_train", std::to_string(s.synth.n_train));
  put("n_holdout", std::to_string(s.synth.n_holdout));
  put("n_test", std::to_string(s.synth.n_test));
  put("lambda", format_double(s.train.lambda));
  put("omega", format_double(s.train.omega.omega));
  put("max_outer_iterations", std::to_string(s.train.max_outer_iterations));
  put("step_size", format_double(s.train.step_size));
  put("step_decay", to_string(s.train.step_decay));
  put("rel_tolerance", format_double(s.train.rel_tolerance));
  put("alternation_block", std::to_string(s.train.alternation_block));
  put("theta_l2", format_double(s.train.theta_l2));
  put("max_update_norm", format_double(s.train.max_update_norm));
  put("learn_theta", boolean(s.train.learn_theta));
  put("learn_kernel_weights", boolean(s.train.learn_kernel_weights));
  put("inference_mode", to_string(s.inference.mode));
  put("exhaustive_limit", std::to_string(s.inference.exhaustive_limit));
  put("mbr_samples", std::to_string(s.inference.mbr_samples));
  put("train_sizes", format_list(s.train_sizes));
  put("sigmas", format_list(s.sigmas));
  put("mkl_bandwidths", format_list(s.mkl_bandwidths));
  put("lambda_grid", format_list(s.lambda_grid));
  put("omega_grid", format_list(s.omega_grid));
  put("include_oracle", boolean(s.include_oracle));
  put("sweep_similarity", s.sweep_similarity);
  return out;
}

const SummaryRow& ExperimentResult::cell(const std::string& method, const std::string& similarity,
                                         double param_value) const {
  for (const auto& row : summary)
    if (row.method == method && row.similarity == similarity && row.param_value == param_value)
      return row;
  throw DomainError(fmt::format("no summary cell for {}/{} at {}", method, similarity, param_value));
}

PrfScores evaluate_model(const std::vector<GroundSetInstance>& instances,
                         const SimilarityConfig& similarity, const ModelParams& params,
                         const InferenceConfig& inference, const CounterRng& rng) {
  if (instances.empty()) throw DomainError("cannot evaluate on an empty split");
  PrfScores mean{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& instance = instances[i];
    const Subset& truth = instance.require_label();
    const auto prepared = prepare_instance(instance, similarity);
    const auto kernel = build_kernel(prepared, params);
    CounterRng local = rng.substream(i);
    const PrfScores s = precision_recall_fscore(predict_subset(kernel, inference, local), truth);
    mean.precision += s.precision;
    mean.recall += s.recall;
    mean.fscore += s.fscore;
  }
  const double n = static_cast<double>(instances.size());
  return {mean.precision / n, mean.recall / n, mean.fscore / n};
}

GridSearchResult grid_search(const std::vector<GroundSetInstance>& train_set,
                             const std::vector<GroundSetInstance>& holdout,
                             const SimilarityConfig& similarity, const TrainConfig& base,
                             const std::vector<double>& lambda_grid,
                             const std::vector<double>& omega_grid,
                             const InferenceConfig& inference, const CounterRng& rng) {
  if (holdout.empty()) throw DomainError("grid search needs a non-empty holdout split");
  if (lambda_grid.empty() || omega_grid.empty()) throw DomainError("grid search needs non-empty grids");
  // lower key wins: higher F, then smaller lambda, then omega nearer 1
  auto key = [](const GridCell& c) {
    return std::make_tuple(-c.holdout.fscore, c.lambda, log_distance_to_one(c.omega));
  };
  GridSearchResult out;
  std::optional<GridCell> best;
  for (double lambda : lambda_grid) {
    for (double omega : omega_grid) {
      TrainConfig config = base;
      config.lambda = lambda;
      config.omega = LossWeights(omega);
      TrainResult fit = lmdpp::train(train_set, similarity, config);
      GridCell cell{lambda, omega,
                    evaluate_model(holdout, similarity, fit.params, inference, rng.substream(0))};
      out.cells.push_back(cell);
      if (!best || key(cell) < key(*best)) {
        best = cell;
        out.best = config;
        out.best_result = std::move(fit);
      }
    }
  }
  return out;
}

ExperimentResult run_fig1a(const ExperimentSpec& spec) {
  require_kind(spec, ExperimentKind::fig1a);
  const int largest = *std::max_element(spec.train_sizes.begin(), spec.train_sizes.end());
  TrainConfig base = spec.train;
  base.learn_theta = true;
  base.learn_kernel_weights = false;
  const SimilarityConfig linear = SimilarityConfig::linear();
  std::vector<ResultRow> rows;
  for (int r = 0; r < spec.replicates; ++r) {
    const SynthDataset data = replicate_dataset(spec, r, largest);
    const CounterRng rng = inference_rng(replicate_seed(spec.seed, r));
    for (int n : spec.train_sizes) {
      const auto train_set = prefix(data.split(Split::train), n);
      const double p = static_cast<double>(n);
      rows.push_back(timed_row(make_row(spec, r, "mle", "true", "train_size", p), [&](ResultRow& row) {
        score_fit(row, fit_mle(train_set, linear, base), data, linear, spec, rng);
      }));
      rows.push_back(timed_row(make_row(spec, r, "lme", "true", "train_size", p), [&](ResultRow& row) {
        score_fit(row, fit_lme(data, train_set, linear, spec, base, rng), data, linear, spec, rng);
      }));
      if (spec.include_oracle) rows.push_back(oracle_row(spec, r, data, "train_size", p, rng));
    }
  }
  return finish(std::move(rows));
}

ExperimentResult run_fig1b(const ExperimentSpec& spec) {
  require_kind(spec, ExperimentKind::fig1b);
  TrainConfig base = spec.train;
  base.learn_theta = true;
  base.learn_kernel_weights = false;
  std::vector<ResultRow> rows;
  for (int r = 0; r < spec.replicates; ++r) {
    const SynthDataset data = replicate_dataset(spec, r, spec.synth.n_train);
    const CounterRng rng = inference_rng(replicate_seed(spec.seed, r));
    const auto& train_set = data.split(Split::train);
    for (double sigma : spec.sigmas) {
      // phi = x in the synthetic data, so an RBF over the similarity features
      // is exactly the misspecified kernel.
      const SimilarityConfig rbf = SimilarityConfig::rbf({sigma});
      rows.push_back(timed_row(make_row(spec, r, "mle", "rbf", "sigma", sigma), [&](ResultRow& row) {
        score_fit(row, fit_mle(train_set, rbf, base), data, rbf, spec, rng);
      }));
      rows.push_back(timed_row(make_row(spec, r, "lme", "rbf", "sigma", sigma), [&](ResultRow& row) {
        score_fit(row, fit_lme(data, train_set, rbf, spec, base, rng), data, rbf, spec, rng);
      }));
    }
    if (spec.include_oracle)
      rows.push_back(oracle_row(spec, r, data, "train_size", spec.synth.n_train, rng));
  }
  return finish(std::move(rows));
}

ExperimentResult run_fig1c(const ExperimentSpec& spec) {
  require_kind(spec, ExperimentKind::fig1c);
  const int largest = *std::max_element(spec.train_sizes.begin(), spec.train_sizes.end());
  TrainConfig fixed = spec.train;
  fixed.learn_theta = true;
  fixed.learn_kernel_weights = false;
  TrainConfig joint = fixed;
  joint.learn_kernel_weights = true;
  const SimilarityConfig linear = SimilarityConfig::linear();
  // No linear term: its weight is held at zero by leaving it out.
  const SimilarityConfig mkl = SimilarityConfig::rbf(spec.mkl_bandwidths);
  std::vector<ResultRow> rows;
  for (int r = 0; r < spec.replicates; ++r) {
    const SynthDataset data = replicate_dataset(spec, r, largest);
    const CounterRng rng = inference_rng(replicate_seed(spec.seed, r));
    for (int n : spec.train_sizes) {
      const auto train_set = prefix(data.split(Split::train), n);
      const double p = static_cast<double>(n);
      rows.push_back(timed_row(make_row(spec, r, "mle", "mkl", "train_size", p), [&](ResultRow& row) {
        score_fit(row, fit_mle(train_set, mkl, joint), data, mkl, spec, rng);
      }));
      rows.push_back(timed_row(make_row(spec, r, "lme", "mkl", "train_size", p), [&](ResultRow& row) {
        score_fit(row, fit_lme(data, train_set, mkl, spec, joint, rng), data, mkl, spec, rng);
      }));
      rows.push_back(timed_row(make_row(spec, r, "mle", "true", "train_size", p), [&](ResultRow& row) {
        score_fit(row, fit_mle(train_set, linear, fixed), data, linear, spec, rng);
      }));
      rows.push_back(timed_row(make_row(spec, r, "lme", "true", "train_size", p), [&](ResultRow& row) {
        score_fit(row, fit_lme(data, train_set, linear, spec, fixed, rng), data, linear, spec, rng);
      }));
      if (spec.include_oracle) rows.push_back(oracle_row(spec, r, data, "train_size", p, rng));
    }
  }
  return finish(std::move(rows));
}

ExperimentResult run_omega_sweep(const ExperimentSpec& spec) {
  require_kind(spec, ExperimentKind::omega_sweep);
  const bool mkl = spec.sweep_similarity == "mkl";
  TrainConfig base = spec.train;
  base.learn_kernel_weights = mkl;
  const SimilarityConfig similarity =
      mkl ? SimilarityConfig::rbf(spec.mkl_bandwidths) : SimilarityConfig::linear();
  std::vector<ResultRow> rows;
  for (int r = 0; r < spec.replicates; ++r) {
    const SynthDataset data = replicate_dataset(spec, r, spec.synth.n_train);
    const CounterRng rng = inference_rng(replicate_seed(spec.seed, r));
    for (double omega : spec.omega_grid) {
      rows.push_back(timed_row(make_row(spec, r, "lme", spec.sweep_similarity, "omega", omega),
                               [&](ResultRow& row) {
        TrainConfig config = base;
        config.omega = LossWeights(omega);
        score_fit(row,
                  Fit{lmdpp::train(data.split(Split::train), similarity, config), config.lambda, omega},
                  data, similarity, spec, rng);
      }));
    }
  }
  ExperimentResult result = finish(std::move(rows));
  std::vector<PrPoint> points;
  for (const auto& s : result.summary) points.push_back({s.mean.recall, s.mean.precision});
  result.pr_curve = interpolate_pr_curve(std::move(points));
  return result;
}

ExperimentResult run_custom(const ExperimentSpec& spec) {
  require_kind(spec, ExperimentKind::custom);
  const SimilarityConfig linear = SimilarityConfig::linear();
  const std::string method = spec.train.lambda > 0.0 ? "lme" : "mle";
  std::vector<ResultRow> rows;
  for (int r = 0; r < spec.replicates; ++r) {
    const SynthDataset data = replicate_dataset(spec, r, spec.synth.n_train);
    const CounterRng rng = inference_rng(replicate_seed(spec.seed, r));
    const double p = spec.synth.n_train;
    rows.push_back(timed_row(make_row(spec, r, method, "true", "train_size", p), [&](ResultRow& row) {
      score_fit(row,
                Fit{lmdpp::train(data.split(Split::train), linear, spec.train), spec.train.lambda,
                    spec.train.omega.omega},
                data, linear, spec, rng);
    }));
    if (spec.include_oracle) rows.push_back(oracle_row(spec, r, data, "train_size", p, rng));
  }
  return finish(std::move(rows));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::fig1a: return run_fig1a(spec);
    case ExperimentKind::fig1b: return run_fig1b(spec);
    case ExperimentKind::fig1c: return run_fig1c(spec);
    case ExperimentKind::omega_sweep: return run_omega_sweep(spec);
    case ExperimentKind::custom: return run_custom(spec);
  }
  throw DomainError("unknown experiment kind");
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::string, double>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const auto& row : rows) {
    Key key{row.method, row.similarity, row.param_name, row.param_value};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const auto& group = groups.at(key);
    SummaryRow s;
    s.experiment = group.front()->experiment;
    std::tie(s.method, s.similarity, s.param_name, s.param_value) = key;
    s.count = static_cast<int>(group.size());
    const double n = s.count;
    auto stat = [&](auto field, double& mean, double& se) {
      mean = 0.0;
      for (const auto* r : group) mean += r->scores.*field;
      mean /= n;
      double ss = 0.0;
      for (const auto* r : group) ss += (r->scores.*field - mean) * (r->scores.*field - mean);
      se = s.count > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    };
    stat(&PrfScores::precision, s.mean.precision, s.stderr_.precision);
    stat(&PrfScores::recall, s.mean.recall, s.stderr_.recall);
    stat(&PrfScores::fscore, s.mean.fscore, s.stderr_.fscore);
    out.push_back(s);
  }
  return out;
}

std::vector<PrPoint> interpolate_pr_curve(std::vector<PrPoint> points, int samples) {
  if (points.empty() || samples < 2) return {};
  std::stable_sort(points.begin(), points.end(),
                   [](const PrPoint& a, const PrPoint& b) { return a.recall < b.recall; });
  const double lo = points.front().recall;
  const double hi = points.back().recall;
  std::vector<PrPoint> curve;
  for (int k = 0; k < samples; ++k) {
    const double r = lo + (hi - lo) * k / (samples - 1);
    std::size_t j = 1;
    while (j < points.size() && points[j].recall < r) ++j;
    double p;
    if (j >= points.size()) {
      p = points.back().precision;
    } else {
      const auto& a = points[j - 1];
      const auto& b = points[j];
      const double span = b.recall - a.recall;
      p = span > 0.0 ? a.precision + (b.precision - a.precision) * (r - a.recall) / span : b.precision;
    }
    curve.push_back({r, p});
  }
  return curve;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "experiment,replicate,method,similarity,param,value,lambda,omega,precision,recall,fscore,"
      "iterations\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.experiment, r.replicate, r.method,
                       r.similarity, r.param_name, format_double(r.param_value),
                       format_double(r.lambda), format_double(r.omega), csv_scores(r.scores),
                       r.iterations);
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "experiment,method,similarity,param,value,count,precision_mean,precision_stderr,"
      "recall_mean,recall_stderr,fscore_mean,fscore_stderr\n";
  for (const auto& s : summary)
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", s.experiment, s.method, s.similarity,
                       s.param_name, format_double(s.param_value), s.count,
                       format_double(s.mean.precision), format_double(s.stderr_.precision),
                       format_double(s.mean.recall), format_double(s.stderr_.recall),
                       format_double(s.mean.fscore), format_double(s.stderr_.fscore));
  return out;
}

std::string pr_curve_to_csv(const std::vector<PrPoint>& curve) {
  std::string out = "recall,precision\n";
  for (const auto& p : curve)
    out += format_double(p.recall) + "," + format_double(p.precision) + "\n";
  return out;
}

void write_experiment_outputs(const ExperimentResult& result, const ExperimentSpec& spec,
                              const std::filesystem::path& out_dir, bool with_timings) {
  std::vector<std::string> files = {"config.cfg", "rows.csv", "summary.csv"};
  write_text_file(out_dir / "config.cfg", experiment_spec_to_config(spec));
  write_text_file(out_dir / "rows.csv", rows_to_csv(result.rows));
  write_text_file(out_dir / "summary.csv", summary_to_csv(result.summary));
  if (spec.kind == ExperimentKind::omega_sweep) {
    write_text_file(out_dir / "pr_curve.csv", pr_curve_to_csv(result.pr_curve));
    files.push_back("pr_curve.csv");
  }
  if (with_timings) {
    std::string t = "experiment,replicate,method,similarity,param,value,runtime_seconds\n";
    for (const auto& r : result.rows)
      t += fmt::format("{},{},{},{},{},{},{}\n", r.experiment, r.replicate, r.method, r.similarity,
                       r.param_name, format_double(r.param_value), format_double(r.runtime_seconds));
    write_text_file(out_dir / "timings.csv", t);
  }
  Json manifest;
  manifest["tool"] = "lmdpp";
  manifest["version"] = kVersion;
  manifest["experiment"] = to_string(spec.kind);
  manifest["seed"] = spec.seed;
  manifest["replicates"] = spec.replicates;
  manifest["rows"] = result.rows.size();
  manifest["files"] = files;
  manifest["libraries"] = {
      {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
      {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
      {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                    NLOHMANN_JSON_VERSION_PATCH)}};
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace lmdpp
