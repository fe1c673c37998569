#ifndef LMDPP_GRADIENTS_HPP
#define LMDPP_GRADIENTS_HPP

// Margin term of the large-margin objective and the matrix-valued
// derivatives of both objective terms with respect to L.

#include "lmdpp/kernel.hpp"
#include "lmdpp/metrics.hpp"

namespace lmdpp {

/// A = sum_{i not in y*} K_ii + omega * sum_{i in y*} (1 - K_ii), given the
/// marginals K_ii and their complements 1 - K_ii.
template <typename DiagDerived, typename ComplementDerived>
typename DiagDerived::Scalar margin_mass(const Eigen::MatrixBase<DiagDerived>& k_diag,
                                         const Eigen::MatrixBase<ComplementDerived>& k_complement,
                                         const Subset& y_star, const LossWeights& w) {
  using Scalar = typename DiagDerived::Scalar;
  y_star.check_range(k_diag.size());
  const auto in_label = y_star.indicator(k_diag.size());
  Scalar outside(0), inside(0);
  for (Index i = 0; i < k_diag.size(); ++i) {
    if (in_label[static_cast<std::size_t>(i)])
      inside += k_complement(i);
    else
      outside += k_diag(i);
  }
  return outside + Scalar(w.omega) * inside;
}

/// log A: the closed form of log sum_y loss_omega(y*, y) P(y; L).
/// Returns -inf when A <= kDetFloor (all mass on y*).
template <typename Scalar>
Scalar softmax_margin_term(const MarginalKernel<Scalar>& k, const Subset& y_star,
                           const LossWeights& w) {
  const VectorX<Scalar> diag = k.marginals();
  const VectorX<Scalar> complement = (Scalar(1) - diag.array()).matrix();
  const Scalar a = margin_mass(diag, complement, y_star, w);
  if (!(a > Scalar(kDetFloor))) return negative_infinity<Scalar>();
  return std::log(a);
}

/// Same quantity, computed from L with 1 - K_ii = [(L+I)^{-1}]_ii.
template <typename Scalar>
Scalar softmax_margin_term(const EnsembleKernel<Scalar>& l, const Subset& y_star,
                           const LossWeights& w) {
  const VectorX<Scalar> complement = l.resolvent_diagonal();
  const VectorX<Scalar> diag = (Scalar(1) - complement.array()).matrix();
  const Scalar a = margin_mass(diag, complement, y_star, w);
  if (!(a > Scalar(kDetFloor))) return negative_infinity<Scalar>();
  return std::log(a);
}

/// Zero-pads a |y| x |y| matrix back to N x N at the rows/columns of y.
template <typename Derived>
MatrixX<typename Derived::Scalar> pad_submatrix(const Eigen::MatrixBase<Derived>& sub,
                                                const Subset& y, Index n) {
  MatrixX<typename Derived::Scalar> out = MatrixX<typename Derived::Scalar>::Zero(n, n);
  for (std::size_t a = 0; a < y.size(); ++a)
    for (std::size_t b = 0; b < y.size(); ++b)
      out(y[a], y[b]) = sub(static_cast<Index>(a), static_cast<Index>(b));
  return out;
}

/// Inverse of a symmetric positive definite label submatrix. `jitter` is added
/// to the diagonal first; throws NumericalError if the result is singular.
template <typename Derived>
MatrixX<typename Derived::Scalar> label_submatrix_inverse(const Eigen::MatrixBase<Derived>& l_y,
                                                          typename Derived::Scalar jitter = 0) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> m = l_y;
  if (m.rows() == 0) return m;  // Eigen's solver does not accept 0x0
  m.diagonal().array() += jitter;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(m);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() <= Scalar(0) || ev.array().log().sum() <= Scalar(std::log(kDetFloor)))
    throw NumericalError("label submatrix L_y* is singular under the current parameters");
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

/// d log P(y*; L) / dL = <(L_y*)^{-1}> - (L + I)^{-1}.
template <typename Scalar>
MatrixX<Scalar> grad_loglik_wrt_L(const EnsembleKernel<Scalar>& l, const Subset& y_star,
                                  Scalar jitter = 0) {
  y_star.check_range(l.size());
  MatrixX<Scalar> g = -l.resolvent();
  if (!y_star.empty())
    g += pad_submatrix(label_submatrix_inverse(principal_submatrix(l.matrix(), y_star), jitter),
                       y_star, l.size());
  return g;
}

/// dK_ii / dL = (L+I)^{-1} e_i e_i^T (L+I)^{-1}.
template <typename Scalar>
MatrixX<Scalar> grad_marginal_diag_wrt_L(const EnsembleKernel<Scalar>& l, Index i) {
  const MatrixX<Scalar> r = l.resolvent();
  return r.col(i) * r.col(i).transpose();
}

/// d log A / dL = (1/A) (L+I)^{-1} D (L+I)^{-1}, with D_ii = 1 off the label
/// and -omega on it.
template <typename Scalar>
MatrixX<Scalar> grad_margin_wrt_L(const EnsembleKernel<Scalar>& l, const MarginalKernel<Scalar>& k,
                                  const Subset& y_star, const LossWeights& w) {
  y_star.check_range(l.size());
  const Index n = l.size();
  const MatrixX<Scalar> r = l.resolvent();
  const VectorX<Scalar> diag = k.marginals();
  const Scalar a = margin_mass(diag, r.diagonal(), y_star, w);
  if (!(a > Scalar(0))) throw NumericalError("margin mass A is not positive");
  VectorX<Scalar> d = VectorX<Scalar>::Ones(n);
  for (Index i : y_star) d(i) = -Scalar(w.omega);
  return (r * d.asDiagonal() * r) / a;
}

}  // namespace lmdpp

#endif  // LMDPP_GRADIENTS_HPP
