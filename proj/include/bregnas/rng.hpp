#pragma once

#include <cstdint>
#include <vector>

#include "bregnas/tensor.hpp"

namespace bregnas {

/// Deterministic random number generator: xoshiro256++ seeded through
/// splitmix64, exactly as in the public reference implementations. The raw
/// 64-bit stream is bit-identical across runs and platforms for a given
/// seed. Normal draws use Box-Muller on the 53-bit uniform stream (one spare
/// value cached), so they are bit-identical wherever libm's log/cos/sin are.
///
/// An Rng is single-owner: never share one instance between threads.
/// Parallel work derives one child per task via derive_seed().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform integer in [0, bound), bound > 0; rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t bound);

  double normal(double mean = 0.0, double std = 1.0);

  /// 1.0 with probability r, else 0.0. r must lie in [0, 1].
  double bernoulli(double r);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Child seed for task `stream` of a base seed; used to split work (per-seed
/// runs, init vs. corruption vs. batching streams) without correlated draws.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Tensor of i.i.d. N(mean, std^2) draws. std must be >= 0.
Tensor rng_normal(Rng& rng, std::vector<std::size_t> shape, double mean, double std);

/// Tensor of i.i.d. {0,1} Bernoulli(r) draws.
Tensor rng_bernoulli(Rng& rng, std::vector<std::size_t> shape, double r);

}  // namespace bregnas
