#ifndef LMDPP_RANDOM_HPP
#define LMDPP_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace lmdpp {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream.
///
/// Draw k of stream (seed, id) is mix64(key + (k + 1) * 0x9e3779b97f4a7c15)
/// with key = mix64(seed ^ mix64(id + 0x632be59bd9b4e019)). Streams are
/// addressed by id, so independent tasks derive their own stream without
/// sharing state and results do not depend on execution order.
///
/// Derived variates, in the order they consume draws:
///   uniform()      one draw: (bits >> 11) * 2^-53, in [0, 1)
///   normal()       two draws u1, u2: sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
///   below(n)       one draw: floor(uniform() * n)
class CounterRng {
public:
  using result_type = std::uint64_t;

  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_(mix64(seed ^ mix64(stream_id + 0x632be59bd9b4e019ULL))) {}

  /// A child stream; deterministic in (this stream's key, id).
  constexpr CounterRng substream(std::uint64_t id) const { return CounterRng(key_, id); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t below(std::uint64_t n) {
    const auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  std::uint64_t draws() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lmdpp

#endif  // LMDPP_RANDOM_HPP
