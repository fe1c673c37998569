#include "oracles.hpp"

#include "lmdpp/config.hpp"
#include "lmdpp/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace lmdpp;

TEST_CASE("config parsing") {
  ConfigMap c = ConfigMap::parse("# comment\nkind = fig1a  # trailing\nsigmas = 0.5, 1,2\nflag = yes\n\nn = 3\n");
  CHECK(c.get_string("kind", "") == "fig1a");
  CHECK(c.get_doubles("sigmas", {}) == std::vector<double>{0.5, 1, 2});
  CHECK(c.get_bool("flag", false));
  CHECK(c.get_int("n", 0) == 3);
  CHECK(c.get_int("absent", 7) == 7);
  c.check_all_used();
  c.set("n=4");
  CHECK(c.get_int("n", 0) == 4);
  CHECK_THROWS_AS(c.set("novalue"), DataError);
  CHECK_THROWS_AS(ConfigMap::parse("justtext\n"), DataError);
  CHECK_THROWS_AS(ConfigMap::parse("x = abc").get_double("x", 0), DataError);
  CHECK_THROWS_AS(ConfigMap::parse("x = 2.5").get_int("x", 0), DataError);
  CHECK_THROWS_AS(ConfigMap::parse("x = maybe").get_bool("x", false), DataError);

  ConfigMap unused = ConfigMap::parse("a = 1\nb = 2");
  unused.get_int("a", 0);
  try {
    unused.check_all_used();
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }
}

TEST_CASE("missing config file names the path") {
  try {
    ConfigMap::load("/nonexistent/dir/x.cfg");
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.cfg") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, 0.0, -2.5})
    CHECK(std::stod(format_double(v)) == v);
  CHECK(format_list(std::vector<int>{1, 2}) == "1,2");
}

TEST_CASE("instance json round trip") {
  CounterRng rng(71);
  GroundSetInstance inst(oracle::random_matrix(4, 3, rng), oracle::random_matrix(4, 2, rng), Subset{0, 3});
  const GroundSetInstance back = instance_from_json(instance_to_json(inst));
  CHECK(back.quality_features == inst.quality_features);
  CHECK(back.similarity_features == inst.similarity_features);
  CHECK(back.label == inst.label);

  std::stringstream ss;
  write_instances(ss, {inst, GroundSetInstance(inst.quality_features, inst.similarity_features)});
  const auto read = read_instances(ss, "mem");
  REQUIRE(read.size() == 2);
  CHECK_FALSE(read[1].label.has_value());

  Json bad = instance_to_json(inst);
  bad["n_items"] = 5;
  CHECK_THROWS_AS(instance_from_json(bad), DataError);
  std::stringstream broken("{not json}\n");
  CHECK_THROWS_AS(read_instances(broken, "mem"), DataError);
}

TEST_CASE("dataset file round trip") {
  SynthConfig sc;
  sc.n_train = 4;
  sc.n_holdout = 2;
  sc.n_test = 3;
  sc.seed = 8;
  const SynthDataset data = generate_dataset(sc);
  std::stringstream ss;
  write_dataset(ss, data, sc);
  const std::string text = ss.str();
  const LoadedDataset back = read_dataset(ss, "mem");
  REQUIRE(back.true_theta.has_value());
  CHECK(*back.true_theta == data.true_theta);
  REQUIRE(back.config.has_value());
  CHECK(back.config->seed == 8u);
  for (Split s : {Split::train, Split::holdout, Split::test}) {
    REQUIRE(back.split(s).size() == data.split(s).size());
    for (std::size_t i = 0; i < data.split(s).size(); ++i) {
      CHECK(back.split(s)[i].quality_features == data.split(s)[i].quality_features);
      CHECK(back.split(s)[i].label == data.split(s)[i].label);
    }
  }
  std::stringstream again;
  write_dataset(again, data, sc);
  CHECK(again.str() == text);
  CHECK_THROWS_AS(read_dataset_file("/nonexistent/data.jsonl"), DataError);
}

TEST_CASE("model json round trip") {
  TrainResult r;
  r.params.theta = Vector::LinSpaced(3, -1.0, 1.0 / 3.0);
  r.params.kernel_weights = Vector::Constant(3, 1.0 / 3.0);
  r.objective_trace = {3.0, 2.5};
  const SimilarityConfig sim{{0.5, 2.0}, true};
  const LoadedModel back = model_from_json(train_result_to_json(r, sim, TrainConfig{}));
  CHECK(back.params.theta == r.params.theta);
  CHECK(back.params.kernel_weights == r.params.kernel_weights);
  CHECK(back.similarity.bandwidths == sim.bandwidths);
  CHECK(back.similarity.include_linear);
  CHECK_THROWS_AS(model_from_json(Json::object()), DataError);
}
