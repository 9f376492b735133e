#pragma once

#include <bit>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "eventodist/errors.hpp"
#include "eventodist/event_set.hpp"
#include "eventodist/numeric.hpp"

namespace eventodist {

/// Normalization tolerance for double-precision distributions. Rational
/// distributions must sum to exactly 1.
inline constexpr double kNormTolerance = 1e-12;

/// The full joint law of event co-occurrence: a probability p(X) for every
/// subset X of the event set, indexed by subset bitmask (p[0] = p(empty)).
/// Immutable after construction; scalar T is double or Rational.
template <class T>
class BasicEventologicalDistribution {
 public:
  /// probabilities has one entry per subset bitmask, size 2^N. Entries must
  /// be nonnegative (and finite in double mode) and sum to 1 -- within
  /// kNormTolerance for double, exactly for Rational. With renormalize set,
  /// a nonzero sum is scaled to 1 instead of checked.
  BasicEventologicalDistribution(EventSet events, std::vector<T> probabilities,
                                 bool renormalize = false)
      : events_(std::move(events)), p_(std::move(probabilities)) {
    if (p_.size() != events_.subset_count()) {
      throw ValidationError("probability vector has " + std::to_string(p_.size()) +
                            " entries, expected 2^N = " +
                            std::to_string(events_.subset_count()));
    }
    T sum{};
    for (std::size_t m = 0; m < p_.size(); ++m) {
      if constexpr (std::is_same_v<T, double>) {
        if (!std::isfinite(p_[m]))
          throw ValidationError("p[\"" + events_.subset_key(static_cast<SubsetMask>(m)) +
                                "\"] is not finite");
      }
      if (p_[m] < T{}) {
        throw ValidationError("p[\"" + events_.subset_key(static_cast<SubsetMask>(m)) +
                              "\"] is negative");
      }
      sum += p_[m];
    }
    if (renormalize) {
      if (sum == T{}) throw ValidationError("cannot renormalize an all-zero distribution");
      for (auto& v : p_) v /= sum;
      return;
    }
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum - 1.0) > kNormTolerance) {
        throw ValidationError("probabilities sum to " + format_shortest(sum) +
                              ", expected 1 within " + format_shortest(kNormTolerance));
      }
    } else {
      if (sum != T{1}) throw ValidationError("probabilities must sum to exactly 1");
    }
  }

  const EventSet& events() const noexcept { return events_; }
  std::size_t event_count() const noexcept { return events_.size(); }

  const T& p(SubsetMask subset) const { return p_[subset]; }
  std::span<const T> probabilities() const noexcept { return p_; }

 private:
  EventSet events_;
  std::vector<T> p_;
};

using EventologicalDistribution = BasicEventologicalDistribution<double>;
using RationalEventologicalDistribution = BasicEventologicalDistribution<Rational>;

/// Converts a rational distribution to the nearest double distribution.
EventologicalDistribution to_double_distribution(const RationalEventologicalDistribution& d);

/// Expected occurrences lambda(X) per nonempty terrace-event. Immutable.
class PoissonIntensities {
 public:
  /// intensities has one entry per nonempty subset: element i corresponds
  /// to bitmask i+1 (size 2^N - 1). All entries must be finite and >= 0.
  PoissonIntensities(EventSet events, std::vector<double> intensities);

  const EventSet& events() const noexcept { return events_; }
  std::size_t event_count() const noexcept { return events_.size(); }

  /// lambda(X) for a nonempty subset; the empty set is rejected.
  double lambda(SubsetMask subset) const;

  /// lambda = sum over all nonempty X of lambda(X): the expected number of
  /// experiments in which at least one event occurs.
  double total() const noexcept { return total_; }

 private:
  EventSet events_;
  std::vector<double> lambda_by_mask_;  // size 2^N, slot 0 fixed at 0
  double total_ = 0.0;
};

// --- Derived scalar quantities -------------------------------------------

/// p_x = P(x) = sum over subsets X containing x of p(X).
template <class T>
T marginal_prob(const BasicEventologicalDistribution<T>& d, std::size_t event_index) {
  const SubsetMask bit = SubsetMask{1} << event_index;
  T sum{};
  for (SubsetMask m = 0; m < d.events().subset_count(); ++m) {
    if (m & bit) sum += d.p(m);
  }
  return sum;
}

template <class T>
T marginal_prob(const BasicEventologicalDistribution<T>& d, std::string_view x) {
  return marginal_prob(d, d.events().index_of(x));
}

/// P(all events of S occur) = sum over supersets X of S of p(X). S nonempty.
template <class T>
T joint_prob(const BasicEventologicalDistribution<T>& d, SubsetMask s) {
  if (s == 0) throw InvalidArgument("joint_prob requires a nonempty subset");
  if (s > d.events().full_mask())
    throw InvalidArgument("subset mask out of range for this event set");
  T sum{};
  for (SubsetMask m = 0; m < d.events().subset_count(); ++m) {
    if ((m & s) == s) sum += d.p(m);
  }
  return sum;
}

template <class T>
T joint_prob(const BasicEventologicalDistribution<T>& d,
             std::span<const std::string_view> labels) {
  return joint_prob(d, d.events().subset_of(labels));
}

/// Kov_xy = P(x and y) - p_x p_y; for x == y the indicator variance
/// p_x (1 - p_x).
template <class T>
T indicator_covariance(const BasicEventologicalDistribution<T>& d, std::size_t x,
                       std::size_t y) {
  const T px = marginal_prob(d, x);
  if (x == y) return px * (T{1} - px);
  const T py = marginal_prob(d, y);
  const SubsetMask s = (SubsetMask{1} << x) | (SubsetMask{1} << y);
  return joint_prob(d, s) - px * py;
}

template <class T>
T indicator_covariance(const BasicEventologicalDistribution<T>& d, std::string_view x,
                       std::string_view y) {
  return indicator_covariance(d, d.events().index_of(x), d.events().index_of(y));
}

/// rho_xy = Kov_xy / (sigma_x sigma_y). Requires nondegenerate marginals.
template <class T>
double indicator_correlation(const BasicEventologicalDistribution<T>& d, std::size_t x,
                             std::size_t y) {
  const T px = marginal_prob(d, x);
  const T py = marginal_prob(d, y);
  const T varx = px * (T{1} - px);
  const T vary = py * (T{1} - py);
  if (varx == T{} || vary == T{}) {
    const std::size_t bad = (varx == T{}) ? x : y;
    throw DegenerateEventError("event \"" + d.events().label(bad) +
                               "\" has marginal probability 0 or 1; correlation undefined");
  }
  if (x == y) return 1.0;
  return to_double(indicator_covariance(d, x, y)) /
         std::sqrt(to_double(varx) * to_double(vary));
}

template <class T>
double indicator_correlation(const BasicEventologicalDistribution<T>& d, std::string_view x,
                             std::string_view y) {
  return indicator_correlation(d, d.events().index_of(x), d.events().index_of(y));
}

namespace detail {
template <class T>
void require_terrace_positive(const BasicEventologicalDistribution<T>& d, SubsetMask m) {
  if (d.p(m) == T{}) {
    const std::string key = d.events().subset_key(m);
    throw SingularDistributionError(
        key, "terrace probability p(\"" + key + "\") is zero");
  }
}
}  // namespace detail

/// First-degree multicovariation tau(x) = p({x}) / p(empty). Uses terrace
/// probabilities, not marginals.
template <class T>
T multicovariation(const BasicEventologicalDistribution<T>& d, std::string_view x) {
  const SubsetMask mx = d.events().singleton(x);
  detail::require_terrace_positive(d, 0);
  return d.p(mx) / d.p(0);
}

/// Second-degree multicovariation
/// tau(x,y) = p(empty) p({x,y}) / (p({x}) p({y})).
template <class T>
T multicovariation(const BasicEventologicalDistribution<T>& d, std::string_view x,
                   std::string_view y) {
  const SubsetMask mx = d.events().singleton(x);
  const SubsetMask my = d.events().singleton(y);
  if (mx == my) throw InvalidArgument("multicovariation of order 2 requires two distinct events");
  detail::require_terrace_positive(d, 0);
  detail::require_terrace_positive(d, mx);
  detail::require_terrace_positive(d, my);
  return d.p(0) * d.p(mx | my) / (d.p(mx) * d.p(my));
}

/// lambda_x = sum over subsets X containing x of lambda(X).
double lambda_marginal(const PoissonIntensities& li, std::size_t event_index);
double lambda_marginal(const PoissonIntensities& li, std::string_view x);

/// lambda_xy = sum over subsets X containing both x and y of lambda(X).
/// x and y must be distinct (use lambda_marginal for x == y).
double lambda_joint(const PoissonIntensities& li, std::size_t x, std::size_t y);
double lambda_joint(const PoissonIntensities& li, std::string_view x, std::string_view y);

}  // namespace eventodist
