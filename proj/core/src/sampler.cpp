#include "eventodist/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace eventodist {

namespace {

inline double canonical_uniform(std::mt19937_64& engine) {
  // 53-bit uniform in [0, 1); independent of std::uniform_real_distribution,
  // whose mapping is implementation-defined.
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hormann's PTRS transformed-rejection sampler, valid for lambda >= 10.
std::int64_t poisson_variate_ptrs(std::mt19937_64& engine, double lambda) {
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);
  while (true) {
    const double u = canonical_uniform(engine) - 0.5;
    const double v = canonical_uniform(engine);
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_lambda - lambda - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

// Inversion by sequential search; one uniform per variate.
std::int64_t poisson_variate_inversion(std::mt19937_64& engine, double lambda) {
  const double u = canonical_uniform(engine);
  double term = std::exp(-lambda);
  double cdf = term;
  std::int64_t k = 0;
  while (u >= cdf) {
    ++k;
    term *= lambda / static_cast<double>(k);
    cdf += term;
    if (term == 0.0) break;  // exhausted double precision in the far tail
  }
  return k;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + splitmix64(stream));
}

std::int64_t poisson_variate(std::mt19937_64& engine, double lambda) {
  if (lambda == 0.0) return 0;
  if (lambda < 10.0) return poisson_variate_inversion(engine, lambda);
  return poisson_variate_ptrs(engine, lambda);
}

BernoulliSchemeSampler::BernoulliSchemeSampler(BinomialMvSpec spec, std::uint64_t seed,
                                               std::uint64_t stream)
    : spec_(std::move(spec)), engine_(derive_stream_seed(seed, stream)) {
  cumulative_.resize(spec_.dist.events().subset_count());
  double cdf = 0.0;
  for (std::size_t m = 0; m < cumulative_.size(); ++m) {
    cdf += spec_.dist.p(static_cast<SubsetMask>(m));
    cumulative_[m] = cdf;
  }
  cumulative_.back() = 1.0;  // guard against normalization round-off
}

TerraceCountVector BernoulliSchemeSampler::next_terraces() {
  TerraceCountVector out;
  out.by_mask.assign(cumulative_.size(), 0);
  out.includes_empty = true;
  for (std::int64_t trial = 0; trial < spec_.trials; ++trial) {
    const double u = canonical_uniform(engine_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t mask =
        std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    ++out.by_mask[mask];
  }
  return out;
}

CountVector BernoulliSchemeSampler::next() { return next_terraces().to_count_vector(); }

PoissonSampler::PoissonSampler(PoissonMvSpec spec, std::uint64_t seed, std::uint64_t stream)
    : spec_(std::move(spec)), engine_(derive_stream_seed(seed, stream)) {}

CountVector PoissonSampler::next() {
  const auto& events = spec_.events();
  CountVector out(std::vector<std::int64_t>(events.size(), 0));
  for (SubsetMask m = 1; m < events.subset_count(); ++m) {
    const std::int64_t k = poisson_variate(engine_, spec_.intensities.lambda(m));
    if (k == 0) continue;
    for (std::size_t x = 0; x < events.size(); ++x) {
      if (m & (SubsetMask{1} << x)) out.n[x] += k;
    }
  }
  return out;
}

CountVector sample_bernoulli_scheme(const BinomialMvSpec& spec, std::uint64_t seed) {
  return BernoulliSchemeSampler(spec, seed).next();
}

TerraceCountVector sample_terrace_counts(const BinomialMvSpec& spec, std::uint64_t seed) {
  return BernoulliSchemeSampler(spec, seed).next_terraces();
}

CountVector sample_poisson(const PoissonMvSpec& spec, std::uint64_t seed) {
  return PoissonSampler(spec, seed).next();
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  for (const auto& [value, count] : other.counts_) counts_[value] += count;
  total_ += other.total_;
}

std::uint64_t EmpiricalDistribution::count(const CountVector& value) const {
  const auto it = counts_.find(value);
  return it == counts_.end() ? 0 : it->second;
}

double EmpiricalDistribution::frequency(const CountVector& value) const {
  if (total_ == 0) return 0.0;
  return static_cast<double>(count(value)) / static_cast<double>(total_);
}

EmpiricalDistribution accumulate(std::span<const CountVector> samples) {
  EmpiricalDistribution out;
  for (const auto& sample : samples) out.add(sample);
  return out;
}

}  // namespace eventodist
