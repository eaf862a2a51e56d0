#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hetkg {

// All randomness in the project flows through these helpers so that runs are
// reproducible bit-for-bit across platforms. std::uniform_*_distribution is
// implementation-defined and deliberately avoided.

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b) ^ c);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline double to_unit_double(std::uint64_t x) {
  // 53 high bits -> [0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Counter-based uniform draw: a pure function of (seed, counter), used where
// per-item decisions must not depend on evaluation order (edge dropout).
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return to_unit_double(mix64(seed, counter));
}

// Small sequential generator (splitmix64 stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  double uniform() { return to_unit_double(next_u64()); }

  // Uniform integer in [0, n), n > 0. Rejection-free multiply-shift would be
  // biased for huge n; the ranges here are far below 2^32 so 128-bit
  // multiply-high is exact enough with rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (~n + 1) % n;  // (2^64 - n) mod n
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  double normal() {
    // Box-Muller; consumes two draws, caches nothing so sequences stay simple.
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * M_PI * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace hetkg
