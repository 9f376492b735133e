#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "eventodist/count_vector.hpp"
#include "eventodist/distribution.hpp"
#include "eventodist/errors.hpp"
#include "eventodist/lattice.hpp"
#include "eventodist/matrix.hpp"
#include "eventodist/numeric.hpp"

namespace eventodist {

/// The multivariate binomial law: n independent experiments, each landing in
/// one terrace-event of the generating distribution.
template <class T>
struct BasicBinomialMvSpec {
  BasicEventologicalDistribution<T> dist;
  std::int64_t trials;

  BasicBinomialMvSpec(BasicEventologicalDistribution<T> d, std::int64_t n)
      : dist(std::move(d)), trials(n) {
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
  }
};

using BinomialMvSpec = BasicBinomialMvSpec<double>;
using RationalBinomialMvSpec = BasicBinomialMvSpec<Rational>;

namespace detail {

// Trial counts up to this bound use exact 64-bit multinomial coefficients
// (20! < 2^63); larger counts go through log-gamma.
inline constexpr std::int64_t kExactCoefficientMaxTrials = 20;

/// n! / prod(counts[i]!) for sum(counts) == n <= 20, exact.
unsigned long long multinomial_coefficient_u64(std::int64_t n,
                                               std::span<const std::int64_t> counts);

/// log of the multinomial probability over the given cells; -inf when a
/// zero-probability cell carries a positive count. Convention 0^0 = 1.
double log_multinomial_term(std::int64_t n, std::span<const std::int64_t> counts,
                            std::span<const double> probs);

/// Multinomial probability n!/prod(counts!) * prod(probs^counts) over
/// parallel cell arrays; sum(counts) must equal n (not rechecked here).
double multinomial_term(std::int64_t n, std::span<const std::int64_t> counts,
                        std::span<const double> probs);
Rational multinomial_term(std::int64_t n, std::span<const std::int64_t> counts,
                          std::span<const Rational> probs);

template <class T>
void validate_counts(const BasicBinomialMvSpec<T>& spec, const CountVector& counts) {
  if (counts.size() != spec.dist.event_count()) {
    throw InvalidArgument("count vector has " + std::to_string(counts.size()) +
                          " entries, expected " + std::to_string(spec.dist.event_count()));
  }
  for (auto v : counts.n) {
    if (v < 0) throw InvalidArgument("count vector entries must be nonnegative");
  }
}

template <class T>
bool any_count_exceeds_trials(const BasicBinomialMvSpec<T>& spec, const CountVector& counts) {
  for (auto v : counts.n) {
    if (v > spec.trials) return true;
  }
  return false;
}

/// True when the generating set partitions the sample space: all mass on
/// singleton terraces (p(empty) = 0 and p(X) = 0 for |X| >= 2).
template <class T>
bool is_partition_supported(const BasicEventologicalDistribution<T>& d) {
  if (d.p(0) != T{}) return false;
  for (SubsetMask m = 1; m < d.events().subset_count(); ++m) {
    if (std::popcount(m) >= 2 && d.p(m) != T{}) return false;
  }
  return true;
}

/// Constraint system for the capped binomial lattice sum, with terraces of
/// zero probability pinned to zero count so the walk never descends into
/// branches that contribute nothing.
template <class T>
ConstraintSystem binomial_constraints(const BasicBinomialMvSpec<T>& spec,
                                      const CountVector& counts) {
  ConstraintSystem cs(spec.dist.events(), counts, spec.trials);
  cs.subset_max.assign(spec.dist.events().subset_count(),
                       std::numeric_limits<std::int64_t>::max());
  for (SubsetMask m = 1; m < spec.dist.events().subset_count(); ++m) {
    if (spec.dist.p(m) == T{}) cs.subset_max[m] = 0;
  }
  return cs;
}

}  // namespace detail

/// Probability that the latent terrace counts equal the given vector: the
/// 2^N-variate multinomial m with parameters (n, {p(X)}). The vector must
/// include n(empty) and total exactly n.
template <class T>
T multinomial_pmf(const BasicBinomialMvSpec<T>& spec, const TerraceCountVector& terraces) {
  const std::size_t cells = spec.dist.events().subset_count();
  if (terraces.by_mask.size() != cells || !terraces.includes_empty) {
    throw InvalidArgument("terrace counts must cover all 2^N subsets including the empty set");
  }
  std::int64_t total = 0;
  for (auto v : terraces.by_mask) {
    if (v < 0) throw InvalidArgument("terrace counts must be nonnegative");
    total += v;
  }
  if (total != spec.trials) {
    throw InvalidArgument("terrace counts total " + std::to_string(total) + ", expected n = " +
                          std::to_string(spec.trials));
  }
  return detail::multinomial_term(spec.trials, terraces.by_mask, spec.dist.probabilities());
}

/// General path: folds the multinomial probabilities over every lattice
/// solution for the target counts. Exposed so the closed-form fast paths can
/// be checked against it.
template <class T>
T pmf_lattice(const BasicBinomialMvSpec<T>& spec, const CountVector& counts) {
  detail::validate_counts(spec, counts);
  if (detail::any_count_exceeds_trials(spec, counts)) return T{};
  const auto cs = detail::binomial_constraints(spec, counts);
  const auto probs = spec.dist.probabilities();
  if constexpr (std::is_same_v<T, double>) {
    KahanSum sum;
    for_each_solution(cs, [&](const TerraceCountVector& s) {
      sum.add(detail::multinomial_term(spec.trials, s.by_mask, probs));
    });
    return sum.value();
  } else {
    T sum{};
    for_each_solution(cs, [&](const TerraceCountVector& s) {
      sum += detail::multinomial_term(spec.trials, s.by_mask, probs);
    });
    return sum;
  }
}

namespace detail {

template <class T>
T pmf_univariate(const BasicBinomialMvSpec<T>& spec, std::int64_t nx) {
  const std::int64_t cells[2] = {spec.trials - nx, nx};
  const T probs[2] = {spec.dist.p(0), spec.dist.p(1)};
  return multinomial_term(spec.trials, cells, std::span<const T>(probs, 2));
}

template <class T>
T pmf_bivariate(const BasicBinomialMvSpec<T>& spec, std::int64_t nx, std::int64_t ny) {
  const std::int64_t n = spec.trials;
  const std::int64_t lo = std::max<std::int64_t>(0, nx + ny - n);
  const std::int64_t hi = std::min(nx, ny);
  const T probs[4] = {spec.dist.p(0), spec.dist.p(1), spec.dist.p(2), spec.dist.p(3)};
  auto term = [&](std::int64_t k) {
    const std::int64_t cells[4] = {n - nx - ny + k, nx - k, ny - k, k};
    return multinomial_term(n, cells, std::span<const T>(probs, 4));
  };
  if constexpr (std::is_same_v<T, double>) {
    KahanSum sum;
    for (std::int64_t k = lo; k <= hi; ++k) sum.add(term(k));
    return sum.value();
  } else {
    T sum{};
    for (std::int64_t k = lo; k <= hi; ++k) sum += term(k);
    return sum;
  }
}

template <class T>
T pmf_partition(const BasicBinomialMvSpec<T>& spec, const CountVector& counts) {
  std::int64_t total = 0;
  for (auto v : counts.n) total += v;
  if (total != spec.trials) return T{};  // off the simplex
  std::vector<T> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = spec.dist.p(SubsetMask{1} << i);
  }
  return multinomial_term(spec.trials, counts.n, std::span<const T>(probs));
}

}  // namespace detail

/// PMF of the multivariate binomial law at a count vector. Counts exceeding
/// the trial count are legal and yield 0. Dispatches to the closed-form
/// univariate, bivariate and partition cases; all agree with pmf_lattice.
template <class T>
T pmf(const BasicBinomialMvSpec<T>& spec, const CountVector& counts) {
  detail::validate_counts(spec, counts);
  if (detail::any_count_exceeds_trials(spec, counts)) return T{};
  if (detail::is_partition_supported(spec.dist)) return detail::pmf_partition(spec, counts);
  const std::size_t n_events = spec.dist.event_count();
  if (n_events == 1) return detail::pmf_univariate(spec, counts[0]);
  if (n_events == 2) return detail::pmf_bivariate(spec, counts[0], counts[1]);
  return pmf_lattice(spec, counts);
}

/// Natural log of pmf, computed with log-gamma terms folded through a
/// streaming log-sum-exp; -inf for impossible outcomes.
double log_pmf(const BinomialMvSpec& spec, const CountVector& counts);

/// The bivariate closed form factored through multicovariations:
/// p(empty)^n tau(x)^nx tau(y)^ny sum over n(xy) of C * tau(x,y)^n(xy).
/// Requires N = 2 and positive p(empty), p({x}), p({y}).
template <class T>
T pmf_bivariate_multicov(const BasicBinomialMvSpec<T>& spec, const CountVector& counts);

template <>
double pmf_bivariate_multicov(const BasicBinomialMvSpec<double>& spec,
                              const CountVector& counts);
template <>
Rational pmf_bivariate_multicov(const BasicBinomialMvSpec<Rational>& spec,
                                const CountVector& counts);

template <class T>
std::vector<T> mean_vector(const BasicBinomialMvSpec<T>& spec) {
  std::vector<T> mean(spec.dist.event_count());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    mean[i] = T(spec.trials) * marginal_prob(spec.dist, i);
  }
  return mean;
}

/// Covariance of the count vector: n times the indicator covariance matrix.
template <class T>
SquareMatrix<T> covariance_matrix(const BasicBinomialMvSpec<T>& spec) {
  const std::size_t n_events = spec.dist.event_count();
  SquareMatrix<T> cov(n_events);
  for (std::size_t i = 0; i < n_events; ++i) {
    for (std::size_t j = i; j < n_events; ++j) {
      T v = T(spec.trials) * indicator_covariance(spec.dist, i, j);
      cov.at(i, j) = v;
      cov.at(j, i) = v;
    }
  }
  return cov;
}

/// Covariance of the per-event standardized counts (xi_x - n p_x)/sigma_x:
/// n on the diagonal, n rho_xy off it. Requires nondegenerate marginals.
template <class T>
SquareMatrix<double> standardized_covariance_matrix(const BasicBinomialMvSpec<T>& spec) {
  const std::size_t n_events = spec.dist.event_count();
  SquareMatrix<double> cov(n_events);
  const double n = static_cast<double>(spec.trials);
  for (std::size_t i = 0; i < n_events; ++i) {
    for (std::size_t j = i; j < n_events; ++j) {
      const double v = n * indicator_correlation(spec.dist, i, j);
      cov.at(i, j) = v;
      cov.at(j, i) = v;
    }
  }
  return cov;
}

}  // namespace eventodist
