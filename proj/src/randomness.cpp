#include "arbor/randomness.hpp"

#include <cmath>

namespace arbor {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const uint128 p = static_cast<uint128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> c, std::array<std::uint64_t, 2> k) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return c;
}

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6A09E667F3BCC908ULL;
  for (std::uint64_t w : words) h = mix64(h ^ mix64(w + 0x9E3779B97F4A7C15ULL));
  return h;
}

uint128 probability_threshold(double p) noexcept {
  if (!(p > 0.0)) return 0;
  if (p >= 1.0) return ~static_cast<uint128>(0);
  int exp = 0;
  const double mant = std::frexp(p, &exp);  // p = mant * 2^exp, mant in [0.5, 1)
  const auto m53 = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  const int shift = exp - 53 + 128;  // p * 2^128 = m53 * 2^shift
  if (shift <= -64) return 0;
  if (shift < 0) return static_cast<uint128>(m53 >> (-shift));
  return static_cast<uint128>(m53) << shift;
}

RandomnessPlan RandomnessPlan::derive(std::uint64_t tag) const noexcept {
  return RandomnessPlan(hash_words({seed_, tag, 0x5EEDULL}));
}

Variate RandomnessPlan::uniform(StreamDomain domain, std::uint64_t stream, std::uint64_t t) const noexcept {
  const auto out = philox4x64({t, 0, static_cast<std::uint64_t>(domain), 0}, {seed_, stream});
  return {out[0], out[1]};
}

std::uint64_t RandomnessPlan::below(StreamDomain domain, std::uint64_t stream, std::uint64_t t,
                                    std::uint64_t bound) const noexcept {
  if (bound <= 1) return 0;
  // Lemire's multiply-shift with rejection; each attempt consumes one block.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const auto out = philox4x64({t, attempt, static_cast<std::uint64_t>(domain), 1}, {seed_, stream});
    for (std::uint64_t word : out) {
      const uint128 m = static_cast<uint128>(word) * bound;
      if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

}  // namespace arbor
