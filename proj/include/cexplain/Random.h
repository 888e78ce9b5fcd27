#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace cexplain {

// SplitMix64: one 64-bit state word, identical output on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream per row so generation order never matters.
inline SplitMix64 rowStream(std::uint64_t seed, std::uint64_t row) {
  return SplitMix64(mix64(seed) ^ mix64(0x5851f42d4c957f2dull * (row + 1)));
}

inline double unitDouble(SplitMix64& rng) {            // [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double unitDoubleOpen(SplitMix64& rng) {        // (0, 1], log-safe
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniformReal(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * unitDouble(rng);
}

inline std::uint64_t uniformIndex(SplitMix64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

// Box-Muller pair of independent standard normals.
inline std::pair<double, double> gaussianPair(SplitMix64& rng) {
  const double u1 = unitDoubleOpen(rng);
  const double u2 = unitDouble(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

template <typename T>
void shuffleInPlace(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniformIndex(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace cexplain
