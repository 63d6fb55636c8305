#pragma once

#include <cstdint>
#include <initializer_list>

namespace echoverse {

/// Deterministic, platform-independent random generator (splitmix64).
///
/// Every random draw in the library flows from a user seed through
/// Rng::derive, which hashes a fixed label path into an independent
/// sub-seed. Consumers never share a generator, so the order in which
/// modules execute cannot change the numbers they see.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return finalize(state_);
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Hash a label path into a sub-seed. Equal (seed, path) pairs always
  /// produce the same value on every platform.
  static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = finalize(seed ^ 0xA24BAED4963EE407ULL);
    for (std::uint64_t p : path) {
      h ^= finalize(p + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
    }
    return h;
  }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace echoverse
