#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "eventodist/binomial.hpp"
#include "eventodist/count_vector.hpp"
#include "eventodist/poisson.hpp"

namespace eventodist {

// All samplers draw from std::mt19937_64, whose output sequence is pinned by
// the C++ standard, and map outputs to [0,1) as (x >> 11) * 2^-53, so a seed
// fully determines every sample on every platform. Parallel use takes one
// sampler per (seed, stream) pair; stream seeds are derived with splitmix64.

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

/// The multivariate Bernoulli testing scheme: each trial lands in one
/// terrace-event, drawn by inverse CDF over the canonical subset order
/// (cumulative array + binary search). One instance owns one PRNG stream.
class BernoulliSchemeSampler {
 public:
  BernoulliSchemeSampler(BinomialMvSpec spec, std::uint64_t seed, std::uint64_t stream = 0);

  /// Draws n trials and returns the latent terrace counts. This is the
  /// primitive draw; next() folds the same trials to the count vector, so
  /// the two views stay coupled for any seed.
  TerraceCountVector next_terraces();

  /// Draws n trials and returns the observable counts n_x.
  CountVector next();

  const BinomialMvSpec& spec() const noexcept { return spec_; }

 private:
  BinomialMvSpec spec_;
  std::vector<double> cumulative_;  // by subset mask
  std::mt19937_64 engine_;
};

/// Draws independent per-terrace counts K(X) ~ Poisson(lambda(X)) and folds
/// them to n_x = sum over X containing x of K(X). Variates use inversion by
/// sequential search below lambda = 10 and the PTRS transformed-rejection
/// method at or above it.
class PoissonSampler {
 public:
  PoissonSampler(PoissonMvSpec spec, std::uint64_t seed, std::uint64_t stream = 0);

  CountVector next();

  const PoissonMvSpec& spec() const noexcept { return spec_; }

 private:
  PoissonMvSpec spec_;
  std::mt19937_64 engine_;
};

/// Single Poisson variate on an external engine (exposed for tests).
std::int64_t poisson_variate(std::mt19937_64& engine, double lambda);

// One-shot draws: construct a fresh sampler from the seed and take one
// sample. Identical (spec, seed) always reproduces the same value, and the
// terrace draw folds exactly to the count draw.
CountVector sample_bernoulli_scheme(const BinomialMvSpec& spec, std::uint64_t seed);
TerraceCountVector sample_terrace_counts(const BinomialMvSpec& spec, std::uint64_t seed);
CountVector sample_poisson(const PoissonMvSpec& spec, std::uint64_t seed);

/// Frequency table over count vectors with exact integer counts. Mergeable,
/// so parallel accumulations can be folded.
class EmpiricalDistribution {
 public:
  void add(const CountVector& sample) {
    ++counts_[sample];
    ++total_;
  }
  void merge(const EmpiricalDistribution& other);

  std::uint64_t total() const noexcept { return total_; }
  const std::map<CountVector, std::uint64_t>& counts() const noexcept { return counts_; }

  std::uint64_t count(const CountVector& value) const;
  double frequency(const CountVector& value) const;

 private:
  std::map<CountVector, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

EmpiricalDistribution accumulate(std::span<const CountVector> samples);

}  // namespace eventodist
