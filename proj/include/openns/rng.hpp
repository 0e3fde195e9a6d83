#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace openns {

// SplitMix64 step; used for seeding and for hierarchical seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a tag. Composing calls gives
/// the hierarchical chain base -> trial -> episode -> clone, so adding a
/// consumer never shifts the randomness of existing streams.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  std::uint64_t x = parent ^ (0x9e3779b97f4a7c15ULL + tag * 0xff51afd7ed558ccdULL);
  std::uint64_t a = splitmix64(x);
  std::uint64_t b = splitmix64(x);
  return a ^ (b >> 1);
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag1, std::uint64_t tag2) {
  return derive_seed(derive_seed(parent, tag1), tag2);
}

/// xoshiro256** generator with explicit draw functions. The 4-word state is
/// serialized verbatim into environment snapshots, so draws are reproducible
/// across snapshot/restore. All distribution draws are stateless beyond the
/// engine (no cached second normal, etc.).
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}

  explicit RandomStream(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Box-Muller without caching; consumes two uniforms per draw.
  double normal(double mean = 0.0, double sd = 1.0) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(6.283185307179586476925286766559 * u2);
  }

  double exponential(double rate) {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    return -std::log(u) / rate;
  }

  /// Knuth multiplication method; adequate for the small rates used here.
  int poisson(double lambda) {
    const double limit = std::exp(-lambda);
    double prod = uniform01();
    int k = 0;
    while (prod > limit) {
      prod *= uniform01();
      ++k;
    }
    return k;
  }

  std::array<std::uint64_t, 4> state() const { return state_; }
  void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

  bool operator==(const RandomStream& o) const { return state_ == o.state_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace openns
