#ifndef SPANID_RNG_HPP_
#define SPANID_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace spanid {

/// Deterministic RNG wrapper. mt19937_64 raw output is standardized, and all
/// bounded sampling is implemented here, so streams are reproducible across
/// platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    std::uint64_t n = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % n);
  }

  /// Uniform double in [0, 1).
  double uniform() { return std::ldexp(static_cast<double>(next() >> 11), -53); }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index sampled proportionally to nonnegative weights.
  int weighted(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Derives an independent stream seed from a base seed and stream indices
  /// (splitmix64 finalizer).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace spanid

#endif  // SPANID_RNG_HPP_
