#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace arbor {

using uint128 = unsigned __int128;

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) noexcept;

/// Order-sensitive 64-bit digest of a structured id.
std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept;

/// A uniform variate in [0, 1) as a 128-bit binary fraction: hi holds the
/// first 64 bits, lo the next 64. Comparisons against a threshold only need
/// lo when hi ties with the threshold's leading block.
struct Variate {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  uint128 bits() const noexcept { return (static_cast<uint128>(hi) << 64) | lo; }
  double to_double() const noexcept { return static_cast<double>(hi >> 11) * 0x1.0p-53; }
};

/// Floor of p * 2^128 for p in [0, 1]; p >= 1 saturates to 2^128 - 1.
uint128 probability_threshold(double p) noexcept;

enum class StreamDomain : std::uint64_t {
  Root = 1,
  Walk = 2,
  SlotChoice = 3,
  TopSlot = 4,
  Sequential = 5,
  Sample = 6,
};

/// Maps (seed, stream id, time index) to independent uniform variates. The
/// result is a pure function of its arguments, so evaluation order and
/// thread count never change the draws.
class RandomnessPlan {
 public:
  explicit RandomnessPlan(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Plan for a sub-run (sample index, retry round, ...).
  RandomnessPlan derive(std::uint64_t tag) const noexcept;

  Variate uniform(StreamDomain domain, std::uint64_t stream, std::uint64_t t) const noexcept;

  /// Exactly uniform integer in [0, bound) by rejection over successive blocks.
  std::uint64_t below(StreamDomain domain, std::uint64_t stream, std::uint64_t t,
                      std::uint64_t bound) const noexcept;

 private:
  std::uint64_t seed_;
};

}  // namespace arbor
