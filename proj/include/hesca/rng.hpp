#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hesca {

// splitmix64 step; also used to finalize hash values.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a over the bytes of `text`, mixed with `extra` through splitmix64.
// Seeds derived from (datasetName, resampleId) and similar tuples go through
// this so results are reproducible across platforms and schedules.
inline std::uint64_t hash64(std::string_view text, std::uint64_t extra = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = h ^ (extra * 0x9e3779b97f4a7c15ULL);
  return splitmix64(state);
}

inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t state = seed ^ (salt * 0xd1b54a32d192ed03ULL);
  return splitmix64(state);
}

// xoshiro256** seeded through splitmix64. Fixed algorithm by design: stream
// content must not depend on the platform's standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t nextU64() {
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

  // Uniform in [0, 1), 53-bit resolution.
  double nextDouble() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double nextDoublePositive() {
    return static_cast<double>((nextU64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * nextDouble(); }

  // Unbiased integer in [0, n).
  std::uint64_t nextBelow(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = nextU64();
      if (r >= threshold) return r % n;
    }
  }

  int nextInt(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(nextBelow(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Standard normal via Box-Muller (basic form, two uniforms per draw).
  double nextGaussian() {
    const double u1 = nextDoublePositive();
    const double u2 = nextDouble();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(nextBelow(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace hesca
