#include "lmdpp/cli.hpp"

#include "lmdpp/harness.hpp"
#include "lmdpp/io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <ostream>
#include <sstream>

namespace lmdpp {

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "lmdpp-out";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "key = value config file");
  app->add_option("--seed", o.seed, "overrides the config seed");
  app->add_option("--out-dir", o.out_dir, "run directory for outputs")->capture_default_str();
  app->add_option("--set", o.overrides, "config override key=value (repeatable)");
}

ConfigMap load_config(const CommonOptions& o) {
  ConfigMap config = o.config_path.empty() ? ConfigMap() : ConfigMap::load(o.config_path);
  for (const auto& assignment : o.overrides) config.set(assignment);
  if (o.seed) config.set("seed", std::to_string(*o.seed));
  return config;
}

std::string scores_line(const PrfScores& s) {
  return fmt::format("precision={:.6f} recall={:.6f} fscore={:.6f}", s.precision, s.recall, s.fscore);
}

int cmd_gen(const CommonOptions& o, std::ostream& out) {
  const ConfigMap config = load_config(o);
  const SynthConfig synth = synth_config_from(config);
  config.check_all_used();
  synth.validate();
  const SynthDataset data = generate_dataset(synth);
  std::ostringstream text;
  write_dataset(text, data, synth);
  const std::filesystem::path dir(o.out_dir);
  write_text_file(dir / "dataset.jsonl", text.str());
  out << fmt::format("wrote {} ({} train, {} holdout, {} test)\n", (dir / "dataset.jsonl").string(),
                     synth.n_train, synth.n_holdout, synth.n_test);
  return kExitOk;
}

const std::vector<GroundSetInstance>& pick_split(const LoadedDataset& data, const std::string& name) {
  const auto& instances = data.split(split_from_string(name));
  if (instances.empty()) throw DataError("split '" + name + "' is empty");
  return instances;
}

int cmd_train(const CommonOptions& o, const std::string& data_path, std::ostream& out) {
  const ConfigMap config = load_config(o);
  const TrainConfig train_config = train_config_from(config);
  const SimilarityConfig similarity = similarity_config_from(config);
  config.check_all_used();
  train_config.validate();
  const LoadedDataset data = read_dataset_file(data_path);
  const auto& train_set = pick_split(data, "train");
  const TrainResult result = train(train_set, similarity, train_config);
  const std::filesystem::path dir(o.out_dir);
  write_text_file(dir / "model.json", train_result_to_json(result, similarity, train_config).dump(2) + "\n");
  out << fmt::format("trained on {} instances: objective {} -> {}, {} iterations{}\n", train_set.size(),
                     format_double(result.initial_objective), format_double(result.final_objective),
                     result.iterations_used, result.converged ? " (converged)" : "");
  return kExitOk;
}

int cmd_infer(const CommonOptions& o, const std::string& data_path, const std::string& model_path,
              const std::string& split, bool evaluate, std::ostream& out) {
  const ConfigMap config = load_config(o);
  const InferenceConfig inference = inference_config_from(config);
  config.check_all_used();
  inference.validate();
  const LoadedDataset data = read_dataset_file(data_path);
  const LoadedModel model = read_model_file(model_path);
  const auto& instances = pick_split(data, split);
  const CounterRng rng(inference.seed, 0x1f1fULL);

  std::string predictions;
  std::string per_instance = "index,precision,recall,fscore\n";
  PrfScores mean{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto prepared_kernel = build_kernel(prepare_instance(instances[i], model.similarity), model.params);
    CounterRng local = rng.substream(i);
    const Subset predicted = predict_subset(prepared_kernel, inference, local);
    Json record;
    record["index"] = i;
    record["split"] = split;
    record["prediction"] = std::vector<Index>(predicted.begin(), predicted.end());
    predictions += record.dump() + "\n";
    if (evaluate) {
      const PrfScores s = precision_recall_fscore(predicted, instances[i].require_label());
      per_instance += fmt::format("{},{},{},{}\n", i, format_double(s.precision),
                                  format_double(s.recall), format_double(s.fscore));
      mean.precision += s.precision;
      mean.recall += s.recall;
      mean.fscore += s.fscore;
    }
  }
  const std::filesystem::path dir(o.out_dir);
  write_text_file(dir / "predictions.jsonl", predictions);
  if (!evaluate) {
    out << fmt::format("wrote {} predictions to {}\n", instances.size(),
                       (dir / "predictions.jsonl").string());
    return kExitOk;
  }
  const double n = static_cast<double>(instances.size());
  mean = {mean.precision / n, mean.recall / n, mean.fscore / n};
  write_text_file(dir / "metrics.csv", per_instance);
  write_text_file(dir / "summary.csv",
                  fmt::format("split,count,precision,recall,fscore\n{},{},{},{},{}\n", split,
                              instances.size(), format_double(mean.precision),
                              format_double(mean.recall), format_double(mean.fscore)));
  out << split << ": " << scores_line(mean) << "\n";
  return kExitOk;
}

int cmd_experiment(const CommonOptions& o, bool timing, std::ostream& out) {
  const ExperimentSpec spec = experiment_spec_from_config(load_config(o));
  const ExperimentResult result = run_experiment(spec);
  write_experiment_outputs(result, spec, o.out_dir, timing);
  for (const auto& s : result.summary)
    out << fmt::format("{:<6} {:<5} {}={:<8} F={:.4f} +- {:.4f}  P={:.4f}  R={:.4f}\n", s.method,
                       s.similarity, s.param_name, format_double(s.param_value), s.mean.fscore,
                       s.stderr_.fscore, s.mean.precision, s.mean.recall);
  return kExitOk;
}

struct GradcheckCase {
  PreparedInstance prepared;
  ModelParams params;
  TrainConfig config;
};

// Random hinge-active instance with three base kernels (two RBF, one linear).
GradcheckCase random_case(int n, CounterRng rng) {
  const SimilarityConfig similarity{{0.7, 2.0}, true};
  for (int attempt = 0;; ++attempt) {
    Matrix x(n, 3), phi(n, 2);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < 3; ++k) x(i, k) = rng.normal();
      for (Index k = 0; k < 2; ++k) phi(i, k) = rng.normal();
    }
    std::vector<Index> label;
    for (Index i = 0; i < n; ++i)
      if (rng.uniform() < 0.4) label.push_back(i);
    if (label.empty()) label.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
    GroundSetInstance instance(x, phi, Subset(label));
    ModelParams params;
    params.theta = Vector(3);
    for (Index k = 0; k < 3; ++k) params.theta(k) = 0.5 * rng.normal();
    params.kernel_weights = Vector(3);
    for (Index k = 0; k < 3; ++k) params.kernel_weights(k) = 0.2 + rng.uniform();
    params.kernel_weights /= params.kernel_weights.sum();
    TrainConfig config;
    config.lambda = 0.5 + 2.0 * rng.uniform();
    config.omega = LossWeights(0.25 + 4.0 * rng.uniform());
    GradcheckCase c{prepare_instance(instance, similarity), params, config};
    const auto eval = evaluate_instance(c.prepared, c.params, c.config);
    if ((eval.hinge_active && std::isfinite(eval.value)) || attempt > 200) return c;
  }
}

int cmd_gradcheck(const CommonOptions& o, int n, int trials, std::ostream& out, std::ostream& err) {
  if (n < 1 || n > 12) throw DomainError("--n must be in [1, 12]");
  if (trials < 1) throw DomainError("--trials must be positive");
  const ConfigMap config = load_config(o);
  const std::uint64_t seed = config.get_uint64("seed", 0);
  config.check_all_used();
  std::string csv = "trial,max_relative_error\n";
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const GradcheckCase c = random_case(n, CounterRng(seed, static_cast<std::uint64_t>(t)));
    const auto eval = evaluate_instance(c.prepared, c.params, c.config, {.with_gradient = true});
    const Index dq = c.params.theta.size();
    Vector analytic(dq + c.params.kernel_weights.size());
    analytic << eval.gradient.theta, eval.gradient.kernel_weights;
    const auto report = finite_difference_check(
        [&](const Vector& flat) {
          return evaluate_instance(c.prepared, unflatten(flat, dq), c.config).value;
        },
        flatten(c.params), analytic);
    worst = std::max(worst, report.max_relative_error);
    csv += fmt::format("{},{}\n", t, format_double(report.max_relative_error));
  }
  write_text_file(std::filesystem::path(o.out_dir) / "gradcheck.csv", csv);
  out << fmt::format("gradcheck n={} trials={} max relative error {:.3e}\n", n, trials, worst);
  if (worst >= 1e-5) {
    err << "gradient check failed: max relative error " << worst << " >= 1e-5\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large-margin DPP learning: data generation, training, inference, experiments"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string data_path, model_path, split = "test";
  bool timing = false;
  int grad_n = 6, grad_trials = 20;

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  add_common(gen, common);

  auto* train_cmd = app.add_subcommand("train", "fit a model on the train split of a dataset");
  add_common(train_cmd, common);
  train_cmd->add_option("--data", data_path, "dataset file (JSONL)")->required();

  auto* infer = app.add_subcommand("infer", "predict subsets with a trained model");
  add_common(infer, common);
  infer->add_option("--data", data_path, "dataset file (JSONL)")->required();
  infer->add_option("--model", model_path, "model file (JSON)")->required();
  infer->add_option("--split", split, "train | holdout | test")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "score predictions against labels");
  add_common(eval, common);
  eval->add_option("--data", data_path, "dataset file (JSONL)")->required();
  eval->add_option("--model", model_path, "model file (JSON)")->required();
  eval->add_option("--split", split, "train | holdout | test")->capture_default_str();

  auto* experiment = app.add_subcommand("experiment", "run a synthetic experiment");
  add_common(experiment, common);
  experiment->add_flag("--timing", timing, "also write wall-clock runtimes to timings.csv");

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the gradients");
  add_common(gradcheck, common);
  gradcheck->add_option("--n", grad_n, "items per ground set")->capture_default_str();
  gradcheck->add_option("--trials", grad_trials, "random instances")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "lmdpp: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(common, out);
    if (train_cmd->parsed()) return cmd_train(common, data_path, out);
    if (infer->parsed()) return cmd_infer(common, data_path, model_path, split, false, out);
    if (eval->parsed()) return cmd_infer(common, data_path, model_path, split, true, out);
    if (experiment->parsed()) return cmd_experiment(common, timing, out);
    if (gradcheck->parsed()) return cmd_gradcheck(common, grad_n, grad_trials, out, err);
  } catch (const NumericalError& e) {
    err << "lmdpp: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "lmdpp: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "lmdpp: " << e.what() << "\n";
    return kExitData;
  }
  err << "lmdpp: no subcommand\n";
  return kExitUsage;
}

}  // namespace lmdpp
