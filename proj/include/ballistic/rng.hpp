// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_RNG_HPP
#define BALLISTIC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ballistic {

/// Identifies one reproducible run. Identical (master, replica) give
/// bit-identical samples within one build of this library.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t replica = 0;

  /// Derived seed for a child task (replica index, grid index, ...).
  /// Children with distinct indices get statistically independent streams.
  Seed child(std::uint64_t index) const noexcept;
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used both as a mixer for
// key derivation and as the per-counter output function.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

inline Seed Seed::child(std::uint64_t index) const noexcept {
  return Seed{master, detail::mix64(replica ^ detail::mix64(index + 0x51ed2701ull))};
}

// Stream tags: every independently consumed sequence gets its own tag so
// substreams never alias.
namespace stream {
inline constexpr std::uint64_t gaps_right = 1;
inline constexpr std::uint64_t gaps_left = 2;
inline constexpr std::uint64_t speeds = 3;
}  // namespace stream

/// Counter-based generator: the n-th output is mix64(key + n*phi) where the
/// key folds (master, replica, stream). No state beyond a counter, so
/// substreams are cheap and draws are position-addressable.
class Rng {
 public:
  Rng(Seed seed, std::uint64_t stream_id) noexcept {
    std::uint64_t k = detail::mix64(seed.master);
    k = detail::mix64(k ^ (seed.replica + 0xd1b54a32d192ed03ull));
    k = detail::mix64(k ^ (stream_id + 0x8cb92ba72f3d8dd7ull));
    key_ = k;
  }

  std::uint64_t next_u64() noexcept { return detail::mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ull); }

  /// Uniform on (0, 1]: 53-bit resolution, never returns 0.
  double next_unit_oc() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double next_unit_co() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Exp(1) by inversion, strictly positive (regenerates on underflow to 0).
  double exponential() noexcept {
    for (;;) {
      double g = -std::log(next_unit_oc());
      if (g > 0.0) return g;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ballistic

#endif
