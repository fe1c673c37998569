#include "lmdpp/subset.hpp"

#include <algorithm>
#include <sstream>

namespace lmdpp {

Subset::Subset(std::vector<Index> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw DomainError("subset contains duplicate indices");
  if (!indices_.empty() && indices_.front() < 0)
    throw DomainError("subset contains a negative index");
}

Subset::Subset(std::initializer_list<Index> indices)
    : Subset(std::vector<Index>(indices)) {}

Subset Subset::from_mask(std::uint64_t mask, Index n_items) {
  Subset s;
  for (Index i = 0; i < n_items; ++i)
    if (mask & (std::uint64_t{1} << i)) s.indices_.push_back(i);
  return s;
}

Subset Subset::full(Index n_items) {
  Subset s;
  s.indices_.resize(static_cast<std::size_t>(n_items));
  for (Index i = 0; i < n_items; ++i) s.indices_[static_cast<std::size_t>(i)] = i;
  return s;
}

bool Subset::contains(Index item) const {
  return std::binary_search(indices_.begin(), indices_.end(), item);
}

bool Subset::fits(Index n_items) const {
  return indices_.empty() || indices_.back() < n_items;
}

void Subset::check_range(Index n_items) const {
  if (!fits(n_items))
    throw DomainError("subset index " + std::to_string(indices_.back()) +
                      " out of range for ground set of size " + std::to_string(n_items));
}

std::vector<bool> Subset::indicator(Index n_items) const {
  std::vector<bool> in(static_cast<std::size_t>(n_items), false);
  for (Index i : indices_) in[static_cast<std::size_t>(i)] = true;
  return in;
}

std::uint64_t Subset::mask() const {
  std::uint64_t m = 0;
  for (Index i : indices_) m |= std::uint64_t{1} << i;
  return m;
}

std::string Subset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < indices_.size(); ++k) os << (k ? "," : "") << indices_[k];
  os << '}';
  return os.str();
}

std::size_t intersection_size(const Subset& a, const Subset& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace lmdpp
