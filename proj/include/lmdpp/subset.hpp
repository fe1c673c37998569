#ifndef LMDPP_SUBSET_HPP
#define LMDPP_SUBSET_HPP

#include "lmdpp/common.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace lmdpp {

/// A subset of a ground set, stored as strictly increasing item indices.
class Subset {
public:
  Subset() = default;

  /// Sorts and validates; throws DomainError on duplicates or negative indices.
  explicit Subset(std::vector<Index> indices);
  Subset(std::initializer_list<Index> indices);

  /// Subset of the items whose bit is set in `mask` (bit i <-> item i).
  static Subset from_mask(std::uint64_t mask, Index n_items);
  /// Every item of a ground set of size n.
  static Subset full(Index n_items);

  std::span<const Index> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  Index operator[](std::size_t k) const { return indices_[k]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(Index item) const;
  /// True when every index is in [0, n).
  bool fits(Index n_items) const;
  /// Throws DomainError if any index is outside [0, n).
  void check_range(Index n_items) const;

  /// Membership indicator of length n.
  std::vector<bool> indicator(Index n_items) const;
  std::uint64_t mask() const;

  std::string to_string() const;

  friend bool operator==(const Subset&, const Subset&) = default;
  friend auto operator<=>(const Subset&, const Subset&) = default;

private:
  std::vector<Index> indices_;
};

std::size_t intersection_size(const Subset& a, const Subset& b);

/// Principal submatrix M_y.
template <typename Derived>
MatrixX<typename Derived::Scalar> principal_submatrix(const Eigen::MatrixBase<Derived>& m,
                                                      const Subset& y) {
  const auto k = static_cast<Index>(y.size());
  MatrixX<typename Derived::Scalar> out(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) out(a, b) = m(y[a], y[b]);
  return out;
}

}  // namespace lmdpp

#endif  // LMDPP_SUBSET_HPP
