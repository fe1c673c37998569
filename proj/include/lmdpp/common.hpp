#ifndef LMDPP_COMMON_HPP
#define LMDPP_COMMON_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace lmdpp {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent sizes between features, parameters or matrices.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A parameter outside its admissible domain (off-simplex weights, sigma <= 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed input files or records.
class DataError : public Error {
public:
  using Error::Error;
};

/// Numerical failure: non-PSD kernels, singular label submatrices.
class NumericalError : public Error {
public:
  using Error::Error;
};

template <typename Scalar>
constexpr Scalar negative_infinity() {
  return -std::numeric_limits<Scalar>::infinity();
}

/// Determinants at or below this are treated as zero (log det = -inf).
inline constexpr double kDetFloor = 1e-300;

}  // namespace lmdpp

#endif  // LMDPP_COMMON_HPP
