#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vnlab {

/// Seed plus stream counter. Two states with the same pair produce the same
/// sequence; distinct streams under one seed are independent for our purposes.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngState substream(std::uint64_t index) const noexcept {
    return {seed, mix(stream * 0x9E3779B97F4A7C15ull + index + 1)};
  }

  static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }
};

/// Engine wrapper with portable helpers (the std distributions are not
/// specified bit-for-bit, so they are avoided).
class Rng {
 public:
  explicit Rng(RngState state) : state_(state) {
    std::seed_seq seq{static_cast<std::uint32_t>(state.seed), static_cast<std::uint32_t>(state.seed >> 32),
                      static_cast<std::uint32_t>(state.stream), static_cast<std::uint32_t>(state.stream >> 32)};
    engine_.seed(seq);
  }

  const RngState& state() const noexcept { return state_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform on {0, ..., bound-1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  template <class T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    shuffle(std::span<T>(v));
  }

  /// Uniformly random permutation image of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    shuffle(v);
    return v;
  }

 private:
  RngState state_;
  std::mt19937_64 engine_;
};

inline std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace vnlab
