#include "eventodist/binomial.hpp"

#include <algorithm>
#include <cmath>

namespace eventodist {
namespace detail {

namespace {

// C(n, k) for n <= 20, exact in 64 bits.
unsigned long long choose_u64(std::int64_t n, std::int64_t k) {
  if (k > n - k) k = n - k;
  unsigned long long c = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
  }
  return c;
}

template <class T>
T pow_count(const T& base, std::int64_t count) {
  T result{1};
  for (std::int64_t i = 0; i < count; ++i) result *= base;
  return result;
}

}  // namespace

unsigned long long multinomial_coefficient_u64(std::int64_t n,
                                               std::span<const std::int64_t> counts) {
  unsigned long long coefficient = 1;
  std::int64_t remaining = n;
  for (auto c : counts) {
    coefficient *= choose_u64(remaining, c);
    remaining -= c;
  }
  return coefficient;
}

double log_multinomial_term(std::int64_t n, std::span<const std::int64_t> counts,
                            std::span<const double> probs) {
  double log_term = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;  // 0^0 = 1 and 0! = 1
    if (probs[i] == 0.0) return -std::numeric_limits<double>::infinity();
    log_term -= std::lgamma(static_cast<double>(counts[i]) + 1.0);
    log_term += static_cast<double>(counts[i]) * std::log(probs[i]);
  }
  return log_term;
}

double multinomial_term(std::int64_t n, std::span<const std::int64_t> counts,
                        std::span<const double> probs) {
  if (n > kExactCoefficientMaxTrials) {
    const double log_term = log_multinomial_term(n, counts, probs);
    return std::isinf(log_term) ? 0.0 : std::exp(log_term);
  }
  double term = static_cast<double>(multinomial_coefficient_u64(n, counts));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    if (probs[i] == 0.0) return 0.0;
    for (std::int64_t k = 0; k < counts[i]; ++k) term *= probs[i];
  }
  return term;
}

Rational multinomial_term(std::int64_t n, std::span<const std::int64_t> counts,
                          std::span<const Rational> probs) {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0 && probs[i] == Rational{}) return Rational{};
  }
  BigInt coefficient = factorial_big(n);
  for (auto c : counts) coefficient /= factorial_big(c);
  Rational term(coefficient);
  for (std::size_t i = 0; i < counts.size(); ++i) term *= pow_count(probs[i], counts[i]);
  return term;
}

}  // namespace detail

double log_pmf(const BinomialMvSpec& spec, const CountVector& counts) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  detail::validate_counts(spec, counts);
  if (detail::any_count_exceeds_trials(spec, counts)) return kNegInf;

  const auto probs = spec.dist.probabilities();
  const std::int64_t n = spec.trials;

  if (detail::is_partition_supported(spec.dist)) {
    std::int64_t total = 0;
    for (auto v : counts.n) total += v;
    if (total != n) return kNegInf;
    std::vector<double> singleton_probs(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
      singleton_probs[i] = spec.dist.p(SubsetMask{1} << i);
    }
    return detail::log_multinomial_term(n, counts.n, singleton_probs);
  }
  if (spec.dist.event_count() == 1) {
    const std::int64_t cells[2] = {n - counts[0], counts[0]};
    return detail::log_multinomial_term(n, cells, probs);
  }
  if (spec.dist.event_count() == 2) {
    const std::int64_t nx = counts[0];
    const std::int64_t ny = counts[1];
    LogSumExp lse;
    for (std::int64_t k = std::max<std::int64_t>(0, nx + ny - n); k <= std::min(nx, ny); ++k) {
      const std::int64_t cells[4] = {n - nx - ny + k, nx - k, ny - k, k};
      lse.add(detail::log_multinomial_term(n, cells, probs));
    }
    return lse.value();
  }

  const auto cs = detail::binomial_constraints(spec, counts);
  LogSumExp lse;
  for_each_solution(cs, [&](const TerraceCountVector& s) {
    lse.add(detail::log_multinomial_term(n, s.by_mask, probs));
  });
  return lse.value();
}

namespace {

template <class T>
void require_bivariate(const BasicBinomialMvSpec<T>& spec) {
  if (spec.dist.event_count() != 2) {
    throw InvalidArgument("the multicovariation form is defined for two events only");
  }
  for (SubsetMask m : {SubsetMask{0}, SubsetMask{1}, SubsetMask{2}}) {
    if (spec.dist.p(m) == T{}) {
      const std::string key = spec.dist.events().subset_key(m);
      throw SingularDistributionError(
          key, "terrace probability p(\"" + key + "\") is zero; multicovariations undefined");
    }
  }
}

}  // namespace

template <>
double pmf_bivariate_multicov(const BinomialMvSpec& spec, const CountVector& counts) {
  require_bivariate(spec);
  detail::validate_counts(spec, counts);
  if (detail::any_count_exceeds_trials(spec, counts)) return 0.0;

  const double p0 = spec.dist.p(0);
  const double tau_x = spec.dist.p(1) / p0;
  const double tau_y = spec.dist.p(2) / p0;
  const double tau_xy = p0 * spec.dist.p(3) / (spec.dist.p(1) * spec.dist.p(2));

  const std::int64_t n = spec.trials;
  const std::int64_t nx = counts[0];
  const std::int64_t ny = counts[1];
  const std::int64_t lo = std::max<std::int64_t>(0, nx + ny - n);
  const std::int64_t hi = std::min(nx, ny);

  const double log_prefactor = static_cast<double>(n) * std::log(p0) +
                               static_cast<double>(nx) * std::log(tau_x) +
                               static_cast<double>(ny) * std::log(tau_y);
  LogSumExp lse;
  for (std::int64_t k = lo; k <= hi; ++k) {
    if (tau_xy == 0.0 && k > 0) continue;
    const std::int64_t cells[4] = {n - nx - ny + k, nx - k, ny - k, k};
    double log_coef = std::lgamma(static_cast<double>(n) + 1.0);
    for (auto c : cells) log_coef -= std::lgamma(static_cast<double>(c) + 1.0);
    lse.add(log_coef + (k > 0 ? static_cast<double>(k) * std::log(tau_xy) : 0.0));
  }
  const double log_value = log_prefactor + lse.value();
  return std::isinf(log_value) ? 0.0 : std::exp(log_value);
}

template <>
Rational pmf_bivariate_multicov(const RationalBinomialMvSpec& spec, const CountVector& counts) {
  require_bivariate(spec);
  detail::validate_counts(spec, counts);
  if (detail::any_count_exceeds_trials(spec, counts)) return Rational{};

  const Rational& p0 = spec.dist.p(0);
  const Rational tau_x = spec.dist.p(1) / p0;
  const Rational tau_y = spec.dist.p(2) / p0;
  const Rational tau_xy = p0 * spec.dist.p(3) / (spec.dist.p(1) * spec.dist.p(2));

  const std::int64_t n = spec.trials;
  const std::int64_t nx = counts[0];
  const std::int64_t ny = counts[1];

  Rational sum{};
  for (std::int64_t k = std::max<std::int64_t>(0, nx + ny - n); k <= std::min(nx, ny); ++k) {
    BigInt coefficient = factorial_big(n);
    for (auto c : {n - nx - ny + k, nx - k, ny - k, k}) coefficient /= factorial_big(c);
    sum += Rational(coefficient) * detail::pow_count(tau_xy, k);
  }
  return detail::pow_count(p0, n) * detail::pow_count(tau_x, nx) *
         detail::pow_count(tau_y, ny) * sum;
}

}  // namespace eventodist
