#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bottlegan/error.hpp"

namespace bottlegan {

// Deterministic xoshiro256++ generator seeded through splitmix64.
// Every distribution below is implemented by hand so that streams are
// bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n), unbiased via rejection.
  std::int64_t uniform_int(std::int64_t n) {
    if (n <= 0) throw InvalidInputError("uniform_int: n must be positive");
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t r = next_u64();
    while (r >= limit) r = next_u64();
    return static_cast<std::int64_t>(r % un);
  }

  // Standard normal via Box-Muller; uncached so the stream position is
  // a pure function of the number of draws.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::int64_t>(last - first);
    for (std::int64_t i = n - 1; i > 0; --i) {
      const std::int64_t j = uniform_int(i + 1);
      std::swap(first[i], first[j]);
    }
  }

  // Uniform draw from the probability simplex (flat Dirichlet).
  std::vector<double> simplex(int n) {
    if (n <= 0) throw InvalidInputError("simplex: n must be positive");
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& wi : w) {
      double u = uniform();
      while (u <= 0.0) u = uniform();
      wi = -std::log(u);
      total += wi;
    }
    for (auto& wi : w) wi /= total;
    return w;
  }

  // Derived generator for an independent substream.
  Rng fork(std::uint64_t stream) {
    std::uint64_t x = next_u64() ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return Rng(splitmix64(x));
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace bottlegan
