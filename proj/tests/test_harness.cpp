#include "oracles.hpp"

#include "lmdpp/harness.hpp"

#include <doctest.h>

#include <cmath>

using namespace lmdpp;

namespace {

ExperimentSpec small_spec(const std::string& kind, const std::string& extra = "") {
  ConfigMap c = ConfigMap::parse("kind = " + kind +
                                 "\nreplicates = 2\nn_train = 30\nn_holdout = 15\nn_test = 20\n"
                                 "max_outer_iterations = 8\n" + extra);
  return experiment_spec_from_config(c);
}

SynthDataset tiny_data(std::uint64_t seed) {
  SynthConfig sc;
  sc.n_train = 25;
  sc.n_holdout = 15;
  sc.n_test = 10;
  sc.seed = seed;
  return generate_dataset(sc);
}

}  // namespace

TEST_CASE("experiment defaults per kind") {
  const ExperimentSpec a = experiment_spec_from_config(ConfigMap::parse("kind = fig1a"));
  CHECK(a.train_sizes == std::vector<int>{100, 200, 400, 800});
  CHECK(a.lambda_grid == std::vector<double>{0, 0.01, 0.1, 1, 10});
  CHECK(a.omega_grid == std::vector<double>{1.0});
  CHECK(a.replicates == 10);
  CHECK(a.inference.mode == InferenceMode::exhaustive);
  CHECK(a.sigmas.size() == 10);
  CHECK(a.sigmas.front() == 0.125);
  CHECK(a.sigmas.back() == 64.0);
  const ExperimentSpec w = experiment_spec_from_config(ConfigMap::parse("kind = omega_sweep"));
  CHECK(w.omega_grid.size() == 8);
  CHECK(w.omega_grid.front() == std::exp2(-6.0));
  CHECK(w.omega_grid.back() == std::exp2(8.0));
  CHECK(w.train.lambda == 1.0);
  CHECK_THROWS_AS(experiment_spec_from_config(ConfigMap::parse("kind = fig1a\nbogus = 1")), DataError);
  CHECK_THROWS_AS(experiment_spec_from_config(ConfigMap::parse("kind = fig9")), DataError);
  CHECK_THROWS_AS(experiment_spec_from_config(ConfigMap::parse("kind = fig1a\nreplicates = 0")), DomainError);
}

TEST_CASE("config echo parses back to the same settings") {
  const ExperimentSpec s = small_spec("fig1b", "sigmas = 0.5, 2\nseed = 12\n");
  const std::string echo = experiment_spec_to_config(s);
  CHECK(experiment_spec_to_config(experiment_spec_from_config(ConfigMap::parse(echo))) == echo);
}

TEST_CASE("grid search contract") {
  const SynthDataset data = tiny_data(5);
  const SimilarityConfig linear = SimilarityConfig::linear();
  TrainConfig base;
  base.max_outer_iterations = 8;
  base.learn_kernel_weights = false;
  const CounterRng rng(3);
  const InferenceConfig inf;

  SUBCASE("single cell") {
    const auto r = grid_search(data.split(Split::train), data.split(Split::holdout), linear, base,
                               {0.1}, {4.0}, inf, rng);
    CHECK(r.cells.size() == 1);
    CHECK(r.best.lambda == 0.1);
    CHECK(r.best.omega.omega == 4.0);
  }
  SUBCASE("argmax over two cells, deterministic") {
    const auto r = grid_search(data.split(Split::train), data.split(Split::holdout), linear, base,
                               {0.0, 1.0}, {1.0}, inf, rng);
    REQUIRE(r.cells.size() == 2);
    const auto& chosen = r.best.lambda == r.cells[0].lambda ? r.cells[0] : r.cells[1];
    const auto& other = r.best.lambda == r.cells[0].lambda ? r.cells[1] : r.cells[0];
    CHECK(chosen.holdout.fscore >= other.holdout.fscore);
    if (chosen.holdout.fscore == other.holdout.fscore) CHECK(r.best.lambda == 0.0);
    const auto again = grid_search(data.split(Split::train), data.split(Split::holdout), linear, base,
                                   {0.0, 1.0}, {1.0}, inf, rng);
    CHECK(again.best.lambda == r.best.lambda);
    CHECK(again.best_result.params.theta == r.best_result.params.theta);
  }
  SUBCASE("ties prefer smaller lambda, then omega nearer 1") {
    // With zero iterations every cell keeps the initial params and ties.
    TrainConfig frozen = base;
    frozen.max_outer_iterations = 0;
    const auto r = grid_search(data.split(Split::train), data.split(Split::holdout), linear, frozen,
                               {1.0, 0.01}, {16.0, 0.5, 4.0}, inf, rng);
    CHECK(r.best.lambda == 0.01);
    CHECK(r.best.omega.omega == 0.5);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(grid_search(data.split(Split::train), {}, linear, base, {0.0}, {1.0}, inf, rng),
                    DomainError);
    CHECK_THROWS_AS(grid_search(data.split(Split::train), data.split(Split::holdout), linear, base,
                                {}, {1.0}, inf, rng),
                    DomainError);
  }
}

TEST_CASE("summary statistics") {
  std::vector<ResultRow> rows(3);
  const double f[3] = {0.5, 0.7, 0.9};
  for (int i = 0; i < 3; ++i) {
    rows[i].method = "mle";
    rows[i].similarity = "true";
    rows[i].param_name = "train_size";
    rows[i].param_value = 100;
    rows[i].scores = {f[i], 1.0, f[i]};
  }
  rows.push_back(rows[0]);
  rows.back().method = "lme";
  const auto s = summarize(rows);
  REQUIRE(s.size() == 2);
  CHECK(s[0].method == "mle");
  CHECK(s[0].count == 3);
  CHECK(s[0].mean.fscore == doctest::Approx(0.7));
  CHECK(s[0].stderr_.fscore == doctest::Approx(0.2 / std::sqrt(3.0)));
  CHECK(s[0].stderr_.recall == 0.0);
  CHECK(s[1].count == 1);
  CHECK(s[1].stderr_.fscore == 0.0);
}

TEST_CASE("precision-recall interpolation") {
  const auto curve = interpolate_pr_curve({{0.8, 0.6}, {0.4, 0.9}, {0.6, 0.8}}, 5);
  REQUIRE(curve.size() == 5);
  CHECK(curve.front().recall == doctest::Approx(0.4));
  CHECK(curve.front().precision == doctest::Approx(0.9));
  CHECK(curve[1].precision == doctest::Approx(0.85));
  CHECK(curve.back().precision == doctest::Approx(0.6));
  CHECK(interpolate_pr_curve({}, 5).empty());
}

TEST_CASE("fig1a shape, oracle sanity and determinism") {
  const ExperimentSpec spec = small_spec("fig1a", "train_sizes = 10, 30\nlambda_grid = 0, 1\n");
  const ExperimentResult a = run_experiment(spec);
  CHECK(a.rows.size() == 2u * 2u * 3u);
  for (const auto& row : a.rows) {
    CHECK(row.scores.fscore >= 0.0);
    CHECK(row.scores.fscore <= 1.0);
  }
  for (double n : {10.0, 30.0}) {
    const auto& oracle = a.cell("oracle", "true", n);
    CHECK(oracle.mean.fscore > 0.0);
    for (const char* m : {"mle", "lme"}) {
      const auto& learned = a.cell(m, "true", n);
      CHECK(oracle.mean.fscore >= learned.mean.fscore - 2.0 * learned.stderr_.fscore - 1e-12);
    }
  }
  CHECK_THROWS_AS(a.cell("mle", "true", 999.0), DomainError);
  const ExperimentResult b = run_experiment(spec);
  CHECK(rows_to_csv(a.rows) == rows_to_csv(b.rows));
  CHECK(summary_to_csv(a.summary) == summary_to_csv(b.summary));
}

TEST_CASE("fig1b and fig1c shapes") {
  const ExperimentSpec b = small_spec("fig1b", "sigmas = 0.5, 4\nlambda_grid = 0, 1\nreplicates = 1\n");
  const auto rb = run_experiment(b);
  CHECK(rb.rows.size() == 2u * 2u + 1u);
  CHECK(rb.cell("lme", "rbf", 4.0).count == 1);

  const ExperimentSpec c =
      small_spec("fig1c", "train_sizes = 20\nmkl_bandwidths = 1, 4\nlambda_grid = 0\nreplicates = 1\n");
  const auto rc = run_experiment(c);
  CHECK(rc.rows.size() == 5u);
  CHECK(rc.cell("lme", "mkl", 20.0).count == 1);
  CHECK(rc.cell("mle", "true", 20.0).count == 1);
}

TEST_CASE("omega sweep rows and the omega = 1 reduction") {
  const ExperimentSpec spec = small_spec("omega_sweep", "sweep_similarity = true\n");
  const auto r = run_experiment(spec);
  CHECK(r.rows.size() == 8u * 2u);
  for (int rep = 0; rep < 2; ++rep) {
    int count = 0;
    for (const auto& row : r.rows) count += row.replicate == rep ? 1 : 0;
    CHECK(count == 8);
  }
  CHECK(r.pr_curve.size() == 51);

  const ExperimentSpec plain = small_spec(
      "custom", "lambda = 1\nomega = 1\ninclude_oracle = false\nlearn_kernel_weights = false\n");
  const auto p = run_experiment(plain);
  for (int rep = 0; rep < 2; ++rep) {
    const ResultRow* sweep_row = nullptr;
    for (const auto& row : r.rows)
      if (row.replicate == rep && row.param_value == 1.0) sweep_row = &row;
    REQUIRE(sweep_row != nullptr);
    CHECK(sweep_row->scores.fscore == p.rows[static_cast<std::size_t>(rep)].scores.fscore);
    CHECK(sweep_row->scores.precision == p.rows[static_cast<std::size_t>(rep)].scores.precision);
  }
}

TEST_CASE("experiment outputs on disk") {
  const ExperimentSpec spec = small_spec("omega_sweep", "replicates = 1\nomega_grid = 0.25, 4\n");
  const auto r = run_experiment(spec);
  const auto dir = std::filesystem::temp_directory_path() / "lmdpp_harness_outputs";
  std::filesystem::remove_all(dir);
  write_experiment_outputs(r, spec, dir);
  for (const char* f : {"config.cfg", "rows.csv", "summary.csv", "pr_curve.csv", "manifest.json"})
    CHECK(std::filesystem::exists(dir / f));
  CHECK_FALSE(std::filesystem::exists(dir / "timings.csv"));
  write_experiment_outputs(r, spec, dir, true);
  CHECK(std::filesystem::exists(dir / "timings.csv"));
  const std::string csv = rows_to_csv(r.rows);
  CHECK(csv.rfind("experiment,replicate,method,similarity,param,value,lambda,omega,precision,recall,fscore,iterations\n", 0) == 0);
  std::filesystem::remove_all(dir);
}
