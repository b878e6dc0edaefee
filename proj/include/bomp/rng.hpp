#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bomp {

// Counter-based generator: every output is a pure function of
// (seed, stream id, counter). Streams can be consumed in any order or in
// parallel and still reproduce bit-for-bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(mix(seed + kGolden)) {}

  std::uint64_t raw(std::uint64_t stream, std::uint64_t counter) const {
    return mix(mix(seed_ ^ mix(stream + kGolden)) + counter * kGolden);
  }

  // Stateful view of one stream; advances an internal counter.
  class Stream {
   public:
    Stream(std::uint64_t base) : base_(base) {}

    std::uint64_t next_raw() { return mix(base_ + (counter_++) * kGolden); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_raw() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_open01() {
      return static_cast<double>((next_raw() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double gaussian() {
      const double u1 = uniform_open01();
      const double u2 = uniform01();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    /// Uniform integer in [0, n).
    int below(int n) {
      const int v = static_cast<int>(uniform01() * static_cast<double>(n));
      return v >= n ? n - 1 : v;
    }

    double rademacher() { return (next_raw() & 1u) ? 1.0 : -1.0; }

    /// k distinct values from {1, .., m}, ascending (partial Fisher-Yates).
    std::vector<int> distinct_sorted(int m, int k) {
      std::vector<int> pool(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
      for (int i = 0; i < k; ++i) {
        const int j = i + below(m - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      pool.resize(static_cast<std::size_t>(k));
      std::sort(pool.begin(), pool.end());
      return pool;
    }

   private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
  };

  Stream stream(std::uint64_t id) const { return Stream(mix(seed_ ^ mix(id + kGolden))); }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr double kPi = 3.14159265358979323846;

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace bomp
