#pragma once

#include <array>
#include <cstdint>

namespace parkernels {

/// splitmix64 as a stateful stream. Each call to next() advances the state by
/// the golden-ratio increment and returns the mixed value.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// First output of a splitmix64 stream seeded with x. Used to derive child
/// seeds: child = splitmix64(parent ^ range_begin).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  return SplitMix64(x).next();
}

/// xoshiro256** seeded from four consecutive splitmix64 outputs.
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Xoshiro256ss(std::uint64_t seed) noexcept : seed_(seed) {
    SplitMix64 sm(seed);
    for (auto& word : s_) word = sm.next();
  }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  constexpr std::uint64_t operator()() noexcept { return next(); }
  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~std::uint64_t{0}; }

  /// Uniform integer in [lo, hi] by plain modular reduction (no rejection).
  /// The slight modulo bias is accepted so every implementation consumes
  /// exactly one 64-bit draw per value.
  constexpr std::int64_t uniform(std::int64_t lo, std::int64_t hi) noexcept {
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t r = next();
    if (span == 0) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + r % span);
  }

  /// Seed this generator was constructed from.
  constexpr std::uint64_t seed() const noexcept { return seed_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace parkernels
