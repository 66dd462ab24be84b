#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace leaklab {

/// Derives a child seed from a root seed, a stage label and an ordinal.
/// All randomness in the artifact flows through this so that parallel and
/// serial execution of the same configuration draw identical streams.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t ordinal = 0);

/// mt19937_64 with hand-rolled samplers. The standard distributions are
/// implementation-defined; these are not, so seeded runs reproduce exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t uniform_u64(std::uint64_t bound);

  /// Uniform in [0, 1).
  double uniform();

  bool bernoulli(double p) { return uniform() < p; }

  /// Index draw from unnormalized nonnegative weights.
  std::size_t discrete(std::span<const double> weights);

  /// Index draw from a precomputed inclusive-prefix-sum of weights.
  std::size_t discrete_from_cdf(std::span<const double> cdf);

  /// Standard normal via Box-Muller.
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape > 0.
  double gamma(double shape);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_u64(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct indices from [0, n), in random order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace leaklab
