#pragma once

#include <cstdint>
#include <vector>

namespace hdmole {

/// Experiment-level seed. Same seed, same everything, on every platform.
struct Seed {
  std::uint64_t value = 0;

  friend bool operator==(Seed, Seed) = default;
};

namespace rng {

/// SplitMix64 finalizer: strong 64-bit avalanche, bijective.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

/// Absorb one word into a running hash state.
constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t word) noexcept {
  return mix64(state ^ (word + kGolden + (state << 6) + (state >> 2)));
}

/// Counter-style cell: a pure function of (seed, index, block). No shared
/// state, so item memories come out identical regardless of generation order.
constexpr std::uint64_t cell(std::uint64_t seed, std::uint64_t index,
                             std::uint64_t block) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = absorb(h, index);
  h = absorb(h, block);
  return h;
}

}  // namespace rng

/// Small sequential PRNG for shuffles. std::shuffle is not specified
/// bit-exactly across standard libraries, so splits roll their own.
class SplitMix64 {
 public:
  explicit SplitMix64(Seed seed) : state_(seed.value) {}

  std::uint64_t next() noexcept {
    state_ += rng::kGolden;
    return rng::mix64(state_);
  }

  /// Uniform draw in [0, bound), unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

/// In-place Fisher-Yates driven by SplitMix64.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, SplitMix64& gen) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(gen.next_below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace hdmole
