#include "oracles.hpp"

#include "lmdpp/kernel.hpp"
#include "lmdpp/model.hpp"
#include "lmdpp/subset.hpp"

#include <doctest.h>

#include <cmath>

using namespace lmdpp;

TEST_CASE("subset keeps sorted unique indices") {
  Subset y{3, 1, 2};
  CHECK(y.size() == 3);
  CHECK(y[0] == 1);
  CHECK(y[2] == 3);
  CHECK(y.contains(2));
  CHECK_FALSE(y.contains(0));
  CHECK(y.to_string() == "{1,2,3}");
  CHECK_THROWS_AS(Subset({1, 1}), DomainError);
  CHECK_THROWS_AS(Subset({-1}), DomainError);
  CHECK(Subset::from_mask(0b1010, 4) == Subset{1, 3});
  CHECK(Subset{1, 3}.mask() == 0b1010U);
  CHECK(Subset::full(3) == Subset{0, 1, 2});
  CHECK(intersection_size(Subset{0, 1, 2}, Subset{1, 2, 5}) == 2);
  CHECK_THROWS_AS((Subset{0, 4}.check_range(4)), DomainError);
  CHECK(Subset{}.empty());
}

TEST_CASE("ground set instance validates shapes and label range") {
  CHECK_THROWS_AS(GroundSetInstance(Matrix::Zero(3, 2), Matrix::Zero(2, 2)), DimensionError);
  CHECK_THROWS_AS(GroundSetInstance(Matrix::Zero(3, 2), Matrix::Zero(3, 2), Subset{3}), DomainError);
  GroundSetInstance ok(Matrix::Zero(3, 2), Matrix::Zero(3, 4), Subset{0, 2});
  CHECK(ok.n_items() == 3);
  CHECK(ok.quality_dim() == 2);
  CHECK(ok.similarity_dim() == 4);
  GroundSetInstance unlabeled(Matrix::Zero(3, 2), Matrix::Zero(3, 4));
  CHECK_THROWS_AS(unlabeled.require_label(), DataError);
}

TEST_CASE("similarity matrix examples") {
  SUBCASE("identical items give 1 for any RBF mixture") {
    Matrix phi(2, 2);
    phi << 0.3, -1.2, 0.3, -1.2;
    GroundSetInstance inst(Matrix::Zero(2, 1), phi);
    const SimilarityConfig cfg = SimilarityConfig::rbf({0.5, 2.0, 7.0});
    Vector w(3);
    w << 0.2, 0.5, 0.3;
    CHECK(build_similarity_matrix(inst, cfg, w)(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("orthogonal linear features give 0") {
    Matrix phi(2, 2);
    phi << 1, 0, 0, 1;
    GroundSetInstance inst(Matrix::Zero(2, 1), phi);
    const SimilarityConfig cfg{{1.0}, true};
    Vector w(2);
    w << 0.0, 1.0;
    CHECK(build_similarity_matrix(inst, cfg, w)(0, 1) == 0.0);
  }
  SUBCASE("single RBF at unit distance") {
    Matrix phi(2, 2);
    phi << 0, 0, 1, 0;
    GroundSetInstance inst(Matrix::Zero(2, 1), phi);
    const Matrix s = build_similarity_matrix(inst, SimilarityConfig::rbf({1.0}), Vector::Ones(1));
    CHECK(s(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(s(0, 1) == doctest::Approx(0.367879).epsilon(1e-6));
  }
  SUBCASE("errors") {
    GroundSetInstance inst(Matrix::Zero(2, 1), Matrix::Zero(2, 2));
    CHECK_THROWS_AS(build_similarity_matrix(inst, SimilarityConfig::rbf({1.0}), Vector::Ones(2)),
                    DimensionError);
    Vector off(2);
    off << 0.7, 0.7;
    CHECK_THROWS_AS(build_similarity_matrix(inst, SimilarityConfig::rbf({1.0, 2.0}), off), DomainError);
    CHECK_THROWS_AS(SimilarityConfig::rbf({0.0}).validate(), DomainError);
    CHECK_THROWS_AS((SimilarityConfig{{}, false}).validate(), DomainError);
  }
}

TEST_CASE("RBF mixtures are PSD and symmetric") {
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    GroundSetInstance inst(Matrix::Zero(7, 1), oracle::random_matrix(7, 3, rng));
    Vector w(3);
    w << rng.uniform(), rng.uniform(), rng.uniform();
    w /= w.sum();
    const Matrix s = build_similarity_matrix(inst, SimilarityConfig::rbf({0.3, 1.0, 4.0}), w);
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("quality vector examples") {
  GroundSetInstance one(Matrix::Random(4, 3), Matrix::Zero(4, 1));
  CHECK(build_quality_vector(one, Vector::Zero(3)).isApprox(Vector::Ones(4)));
  Matrix x(1, 2);
  x << std::log(2.0), 5.0;
  Vector theta(2);
  theta << 1.0, 0.0;
  CHECK(build_quality_vector(GroundSetInstance(x, Matrix::Zero(1, 1)), theta)(0) ==
        doctest::Approx(2.0).epsilon(1e-15));
  x << -1.0, 1.0;
  theta << 1.0, 1.0;
  CHECK(build_quality_vector(GroundSetInstance(x, Matrix::Zero(1, 1)), theta)(0) == 1.0);
  CHECK_THROWS_AS(build_quality_vector(one, Vector::Zero(2)), DimensionError);
}

TEST_CASE("assemble_L examples") {
  const auto l1 = assemble_L(Vector::Ones(3), Matrix::Identity(3, 3));
  CHECK(l1.matrix().isApprox(Matrix::Identity(3, 3)));
  CHECK(l1.eigenvalues().isApprox(Vector::Ones(3)));

  Vector q(2);
  q << 2, 3;
  const auto l2 = assemble_L(q, Matrix::Identity(2, 2));
  CHECK(l2.matrix()(0, 0) == 4.0);
  CHECK(l2.matrix()(1, 1) == 9.0);
  CHECK(l2.matrix()(0, 1) == 0.0);

  const auto l3 = assemble_L(Vector::Ones(2), Matrix::Ones(2, 2));
  CHECK(l3.eigenvalues()(0) == doctest::Approx(0.0));
  CHECK(l3.eigenvalues()(1) == doctest::Approx(2.0));

  Matrix bad(2, 2);
  bad << 0, 1, 1, 0;  // eigenvalue -1
  CHECK_THROWS_AS(assemble_L(Vector::Ones(2), bad), NumericalError);
  Vector nonpositive(2);
  nonpositive << 1, 0;
  CHECK_THROWS_AS(assemble_L(nonpositive, Matrix::Identity(2, 2)), DomainError);
  Matrix asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS((EnsembleKernel<double>{asym}), DomainError);
  CHECK_THROWS_AS(assemble_L(Vector::Ones(3), Matrix::Identity(2, 2)), DimensionError);
}

TEST_CASE("tiny negative eigenvalues are clamped") {
  Matrix l = Matrix::Zero(2, 2);
  l(0, 0) = 1.0;
  l(1, 1) = -1e-9;
  EnsembleKernel<double> k(l);
  CHECK(k.eigenvalues().minCoeff() == 0.0);
}

TEST_CASE("eigendecomposition reconstructs L") {
  CounterRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix l = oracle::random_psd(6, 1 + trial % 6, rng);
    EnsembleKernel<double> k(l);
    CHECK((k.reconstruct() - l).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, l.cwiseAbs().maxCoeff()));
    CHECK(k.eigenvalues().minCoeff() >= 0.0);
  }
}

TEST_CASE("marginal kernel examples") {
  Matrix one(1, 1);
  one << 1.0;
  CHECK(marginal_kernel_from_L(EnsembleKernel<double>(one)).matrix()(0, 0) == doctest::Approx(0.5));
  CHECK(marginal_kernel_from_L(EnsembleKernel<double>(Matrix::Zero(3, 3))).matrix().isZero());
  const Matrix k3 = marginal_kernel_from_L(EnsembleKernel<double>(3.0 * Matrix::Identity(2, 2))).matrix();
  CHECK(k3.isApprox(0.75 * Matrix::Identity(2, 2)));
}

TEST_CASE("marginal kernel equals L (L + I)^-1 and maps the spectrum") {
  CounterRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix l = oracle::random_psd(6, 6, rng);
    EnsembleKernel<double> ens(l);
    const Matrix k = marginal_kernel_from_L(ens).matrix();
    const Matrix direct = l * (l + Matrix::Identity(6, 6)).inverse();
    CHECK((k - direct).cwiseAbs().maxCoeff() <= 1e-8);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k);
    const Vector expected = (ens.eigenvalues().array() / (ens.eigenvalues().array() + 1.0)).matrix();
    CHECK((es.eigenvalues() - expected).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(es.eigenvalues().maxCoeff() < 1.0);
    CHECK(k.diagonal().minCoeff() >= 0.0);
  }
}

TEST_CASE("log probability examples") {
  const EnsembleKernel<double> eye(Matrix::Identity(4, 4));
  for (const Subset& y : {Subset{}, Subset{2}, Subset{0, 1, 3}})
    CHECK(log_probability(eye, y) == doctest::Approx(-4.0 * std::log(2.0)));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = 3;
  CHECK(log_probability(EnsembleKernel<double>(d), Subset{1}) ==
        doctest::Approx(std::log(3.0) - std::log(8.0)));
  CHECK(log_probability(EnsembleKernel<double>(Matrix::Ones(2, 2)), Subset{0, 1}) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("probabilities sum to one over all subsets") {
  CounterRng rng(10);
  for (Index n = 1; n <= 8; ++n) {
    const EnsembleKernel<double> l(oracle::random_psd(n, n, rng, 0.8));
    double total = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
      total += std::exp(log_probability(l, Subset::from_mask(m, n)));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("subset marginal examples and the superset-sum identity") {
  CHECK(subset_marginal(MarginalKernel<double>(Matrix::Identity(2, 2) * 0.3), Subset{}) == 1.0);
  Matrix dup = Matrix::Constant(2, 2, 0.4);
  CHECK(subset_marginal(MarginalKernel<double>(dup), Subset{0, 1}) == doctest::Approx(0.0));

  CounterRng rng(11);
  const Matrix l = oracle::random_psd(5, 5, rng);
  const auto k = marginal_kernel_from_L(EnsembleKernel<double>(l));
  for (std::uint64_t m = 0; m < 32; ++m) {
    const Subset y = Subset::from_mask(m, 5);
    CHECK(subset_marginal(k, y) == doctest::Approx(oracle::containment_probability(l, y)).epsilon(1e-9));
  }
}

TEST_CASE("pairs repel: det(K_ij) <= min(K_ii, K_jj)") {
  CounterRng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = marginal_kernel_from_L(EnsembleKernel<double>(oracle::random_psd(6, 3, rng)));
    for (Index i = 0; i < 6; ++i)
      for (Index j = i + 1; j < 6; ++j)
        CHECK(subset_marginal(k, Subset{i, j}) <=
              std::min(k.matrix()(i, i), k.matrix()(j, j)) + 1e-12);
  }
}

TEST_CASE("log_det_psd conventions") {
  CHECK(log_det_psd(Matrix(0, 0)) == 0.0);
  CHECK(log_det_psd(Matrix::Zero(2, 2)) == -std::numeric_limits<double>::infinity());
  CHECK(log_det_psd(Matrix(Matrix::Identity(3, 3) * 2.0)) == doctest::Approx(3.0 * std::log(2.0)));
  CHECK(log_det_psd(Matrix(Matrix::Identity(2, 2) * 1e-200)) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("initial parameters and beta") {
  const SimilarityConfig cfg{{1.0, 2.0}, true};
  const ModelParams p = ModelParams::initial(4, cfg);
  CHECK(p.theta.isZero());
  CHECK(p.kernel_weights.size() == 3);
  CHECK(p.kernel_weights.sum() == doctest::Approx(1.0));
  CHECK(p.beta(cfg) == doctest::Approx(1.0 / 3.0));
  CHECK(p.beta(SimilarityConfig::rbf({1.0, 2.0, 3.0})) == 0.0);
}
