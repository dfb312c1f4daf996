#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mitodet {

/// Seeded generator whose derived draws are fully specified here, so a seed
/// replays identically across standard libraries. std::mt19937_64 output is
/// standardized; the std distributions and std::shuffle are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, index), e.g. one per patch or epoch.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in [lo, hi); returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Uniform integer in [0, n), unbiased. n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);
  // Always consumes exactly one draw.
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mitodet
