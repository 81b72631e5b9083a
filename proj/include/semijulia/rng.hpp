#pragma once

#include <cstdint>

// Counter-based randomness. Every random decision in the orbit engines is a
// pure function of (seed, stream salt, depth, index), so results do not
// depend on evaluation order or worker count.

namespace semijulia {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b), c);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t d) {
  return mix64(mix64(a, b, c), d);
}

// Map 64 random bits to a double in [0, 1).
constexpr double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream salts keep independent random decisions decorrelated.
namespace rng_salt {
inline constexpr std::uint64_t kLetter = 0xA1;
inline constexpr std::uint64_t kDecimate = 0xA2;
inline constexpr std::uint64_t kUnionKey = 0xA3;
inline constexpr std::uint64_t kSeedCloud = 0xA4;
inline constexpr std::uint64_t kApplyLetter = 0xA5;
inline constexpr std::uint64_t kSingleJulia = 0xA6;
}  // namespace rng_salt

// Small sequential generator for tests and sampling loops.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  double next_double() { return unit_double(next()); }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace semijulia
