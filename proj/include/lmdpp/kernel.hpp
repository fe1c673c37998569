#ifndef LMDPP_KERNEL_HPP
#define LMDPP_KERNEL_HPP

#include "lmdpp/common.hpp"
#include "lmdpp/subset.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace lmdpp {

/// Eigenvalues in [-kPsdClampTolerance * scale, 0) are repaired to 0, where
/// scale = max(1, largest |eigenvalue|). Anything more negative is rejected.
inline constexpr double kPsdClampTolerance = 1e-6;
inline constexpr double kSymmetryTolerance = 1e-10;

/// Log-determinant of a symmetric PSD matrix through its eigenvalues.
/// Returns -inf when the determinant is at or below kDetFloor; det of the
/// 0x0 matrix is 1.
template <typename Derived>
typename Derived::Scalar log_det_psd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() == 0) return Scalar(0);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m.eval(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= Scalar(0)) return negative_infinity<Scalar>();
  const Scalar value = ev.array().log().sum();
  if (value <= Scalar(std::log(kDetFloor))) return negative_infinity<Scalar>();
  return value;
}

/// L-ensemble kernel with its eigendecomposition computed once at construction.
template <typename Scalar_>
class EnsembleKernel {
public:
  using Scalar = Scalar_;

  EnsembleKernel() = default;

  /// Throws DomainError if `l` is not square/symmetric and NumericalError if
  /// it has an eigenvalue below the clamping tolerance.
  explicit EnsembleKernel(MatrixX<Scalar> l) : matrix_(std::move(l)) {
    if (matrix_.rows() != matrix_.cols()) throw DimensionError("L must be square");
    const Scalar scale = std::max(Scalar(1), matrix_.cwiseAbs().maxCoeff());
    if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > Scalar(kSymmetryTolerance) * scale)
      throw DomainError("L is not symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(matrix_);
    if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition of L failed");
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    const Scalar floor = -Scalar(kPsdClampTolerance) *
                         std::max(Scalar(1), eigenvalues_.cwiseAbs().maxCoeff());
    if (eigenvalues_.minCoeff() < floor)
      throw NumericalError("L is not positive semidefinite (eigenvalue " +
                           std::to_string(static_cast<double>(eigenvalues_.minCoeff())) + ")");
    eigenvalues_ = eigenvalues_.cwiseMax(Scalar(0));
  }

  Index size() const { return matrix_.rows(); }
  const MatrixX<Scalar>& matrix() const { return matrix_; }
  const VectorX<Scalar>& eigenvalues() const { return eigenvalues_; }
  const MatrixX<Scalar>& eigenvectors() const { return eigenvectors_; }

  /// log det(L + I) = sum_m log(1 + lambda_m).
  Scalar log_normalizer() const { return eigenvalues_.array().log1p().sum(); }

  /// (L + I)^{-1} from the cached eigenpairs.
  MatrixX<Scalar> resolvent() const {
    const VectorX<Scalar> w = (Scalar(1) + eigenvalues_.array()).inverse();
    return eigenvectors_ * w.asDiagonal() * eigenvectors_.transpose();
  }

  /// Diagonal of (L + I)^{-1}, i.e. 1 - K_ii without cancellation.
  VectorX<Scalar> resolvent_diagonal() const {
    const VectorX<Scalar> w = (Scalar(1) + eigenvalues_.array()).inverse();
    return eigenvectors_.array().square().matrix() * w;
  }

  /// Reconstruction sum_m lambda_m v_m v_m^T from the clamped spectrum.
  MatrixX<Scalar> reconstruct() const {
    return eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
  }

private:
  MatrixX<Scalar> matrix_;
  VectorX<Scalar> eigenvalues_;
  MatrixX<Scalar> eigenvectors_;
};

/// K = L (L + I)^{-1}; K_ii is the inclusion marginal of item i.
template <typename Scalar_>
class MarginalKernel {
public:
  using Scalar = Scalar_;

  MarginalKernel() = default;
  explicit MarginalKernel(MatrixX<Scalar> k) : matrix_(std::move(k)) {}

  Index size() const { return matrix_.rows(); }
  const MatrixX<Scalar>& matrix() const { return matrix_; }
  VectorX<Scalar> marginals() const { return matrix_.diagonal(); }

private:
  MatrixX<Scalar> matrix_;
};

/// L_ij = q_i q_j S_ij.
template <typename QualityDerived, typename SimilarityDerived>
EnsembleKernel<typename QualityDerived::Scalar> assemble_L(
    const Eigen::MatrixBase<QualityDerived>& q, const Eigen::MatrixBase<SimilarityDerived>& s) {
  using Scalar = typename QualityDerived::Scalar;
  if (s.rows() != s.cols() || s.rows() != q.size())
    throw DimensionError("quality vector and similarity matrix sizes differ");
  if ((q.array() <= Scalar(0)).any()) throw DomainError("qualities must be strictly positive");
  MatrixX<Scalar> l = (q * q.transpose()).cwiseProduct(s);
  return EnsembleKernel<Scalar>(std::move(l));
}

/// K = sum_m lambda_m / (lambda_m + 1) v_m v_m^T.
template <typename Scalar>
MarginalKernel<Scalar> marginal_kernel_from_L(const EnsembleKernel<Scalar>& l) {
  const VectorX<Scalar> w = l.eigenvalues().array() / (l.eigenvalues().array() + Scalar(1));
  return MarginalKernel<Scalar>(l.eigenvectors() * w.asDiagonal() * l.eigenvectors().transpose());
}

/// log P(y; L) = log det(L_y) - log det(L + I). Returns -inf when L_y is
/// numerically singular; never throws for in-range subsets.
template <typename Scalar>
Scalar log_probability(const EnsembleKernel<Scalar>& l, const Subset& y) {
  y.check_range(l.size());
  const Scalar log_det_y = log_det_psd(principal_submatrix(l.matrix(), y));
  if (!std::isfinite(log_det_y)) return negative_infinity<Scalar>();
  return log_det_y - l.log_normalizer();
}

/// P(y subset of Y) = det(K_y).
template <typename Scalar>
Scalar subset_marginal(const MarginalKernel<Scalar>& k, const Subset& y) {
  y.check_range(k.size());
  if (y.empty()) return Scalar(1);
  const Scalar det = principal_submatrix(k.matrix(), y).determinant();
  return std::clamp(det, Scalar(0), Scalar(1));
}

}  // namespace lmdpp

#endif  // LMDPP_KERNEL_HPP
