#include "oracles.hpp"

#include "lmdpp/metrics.hpp"

#include <doctest.h>

using namespace lmdpp;

TEST_CASE("hamming loss examples") {
  CHECK(hamming_loss(Subset{1, 2}, Subset{1, 2}) == 0);
  CHECK(hamming_loss(Subset{1, 2}, Subset{2, 3}) == 2);
  CHECK(hamming_loss(Subset{}, Subset{1, 2, 3}) == 3);
}

TEST_CASE("generalized hamming examples") {
  CHECK(generalized_hamming(Subset{1, 2}, Subset{2, 3}, LossWeights(1.0)) == 2.0);
  CHECK(generalized_hamming(Subset{1, 2}, Subset{2, 3}, LossWeights(2.0)) == 3.0);
  CHECK(generalized_hamming(Subset{1}, Subset{1}, LossWeights(64.0)) == 0.0);
  CHECK_THROWS_AS(LossWeights(0.0), DomainError);
  CHECK_THROWS_AS(LossWeights(-1.0), DomainError);
  CHECK(LossWeights().omega == 1.0);
}

TEST_CASE("loss properties on random pairs") {
  CounterRng rng(21);
  bool asymmetric_witness = false;
  for (int trial = 0; trial < 10000; ++trial) {
    const Subset a = oracle::random_subset(8, rng);
    const Subset b = oracle::random_subset(8, rng);
    const auto h = hamming_loss(a, b);
    CHECK(generalized_hamming(a, b, LossWeights(1.0)) == static_cast<double>(h));
    CHECK(h == hamming_loss(b, a));
    CHECK((h == 0) == (a == b));
    CHECK((generalized_hamming(a, b, LossWeights(3.0)) == 0.0) == (a == b));
    if (generalized_hamming(a, b, LossWeights(3.0)) != generalized_hamming(b, a, LossWeights(3.0)))
      asymmetric_witness = true;
  }
  CHECK(asymmetric_witness);
  CHECK(generalized_hamming(Subset{0}, Subset{}, LossWeights(3.0)) == 3.0);
  CHECK(generalized_hamming(Subset{}, Subset{0}, LossWeights(3.0)) == 1.0);
}

TEST_CASE("precision recall fscore examples") {
  auto s = precision_recall_fscore(Subset{0, 3}, Subset{0, 3});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.fscore == 1.0);
  s = precision_recall_fscore(Subset{1, 2, 3, 4}, Subset{1, 2});
  CHECK(s.precision == 0.5);
  CHECK(s.recall == 1.0);
  CHECK(s.fscore == doctest::Approx(2.0 / 3.0));
  s = precision_recall_fscore(Subset{1}, Subset{2});
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.fscore == 0.0);
}

TEST_CASE("empty set conventions") {
  auto s = precision_recall_fscore(Subset{}, Subset{});
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.fscore == 1.0);
  s = precision_recall_fscore(Subset{}, Subset{1});
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.fscore == 0.0);
  s = precision_recall_fscore(Subset{1}, Subset{});
  CHECK(s.precision == 0.0);
  CHECK(s.recall == 0.0);
  CHECK(s.fscore == 0.0);
}

TEST_CASE("fscore properties on random pairs") {
  CounterRng rng(22);
  for (int trial = 0; trial < 5000; ++trial) {
    const Subset a = oracle::random_subset(8, rng);
    const Subset b = oracle::random_subset(8, rng);
    const auto s = precision_recall_fscore(a, b);
    CHECK(s.fscore <= std::min(1.0, 2.0 * std::min(s.precision, s.recall)) + 1e-15);
    if (s.precision > 0 && s.recall > 0) {
      CHECK(s.fscore >= std::min(s.precision, s.recall) - 1e-15);
      CHECK(s.fscore <= std::max(s.precision, s.recall) + 1e-15);
    }
    if (a.size() == b.size() && !a.empty()) {
      CHECK(s.precision == doctest::Approx(s.recall));
      CHECK(s.fscore == doctest::Approx(s.precision));
    }
  }
}
