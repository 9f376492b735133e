#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "eventodist/binomial.hpp"
#include "eventodist/count_vector.hpp"
#include "eventodist/distribution.hpp"
#include "eventodist/matrix.hpp"

namespace eventodist {

/// The multivariate Poisson law with per-terrace intensities lambda(X).
struct PoissonMvSpec {
  PoissonIntensities intensities;

  explicit PoissonMvSpec(PoissonIntensities li) : intensities(std::move(li)) {}

  const EventSet& events() const noexcept { return intensities.events(); }
};

/// PMF at a count vector:
/// e^{-lambda} * sum over terrace counts of prod lambda(X)^n(X) / n(X)!,
/// the sum running over all nonnegative solutions of the marginal equations
/// (no total cap). Dispatches to the single-parameter bivariate sum at N=2.
double pmf(const PoissonMvSpec& spec, const CountVector& counts);

/// General lattice-fold path, exposed for cross-checking the fast paths.
double pmf_lattice(const PoissonMvSpec& spec, const CountVector& counts);

/// Marginal law of one coordinate: Poisson with rate lambda_x.
double marginal_pmf(const PoissonMvSpec& spec, std::size_t event_index, std::int64_t n_x);
double marginal_pmf(const PoissonMvSpec& spec, std::string_view x, std::int64_t n_x);

/// Mean vector (lambda_x per event).
std::vector<double> mean_vector(const PoissonMvSpec& spec);

/// Covariance matrix: lambda_x on the diagonal, lambda_xy off it.
SquareMatrix<double> covariance_matrix(const PoissonMvSpec& spec);

/// Poisson-form approximation of the binomial PMF with lambda(X) = n p(X):
/// e^{-n sum p(X)} * sum over capped lattice solutions of
/// prod [n p(X)]^{n(X)} / n(X)!. The total-count cap sum n(X) <= n is kept.
double approximate_binomial_pmf(const BinomialMvSpec& spec, const CountVector& counts);

struct ConvergenceRow {
  std::int64_t trials;
  double sup_deviation;
};

/// For each trial count n, builds the binomial law with p(X) = lambda(X)/n
/// and reports the sup over the box [0,box]^N of |binomial - poisson| PMF
/// deviation. Rows are ordered by ascending n. Throws
/// InfeasibleTrialCountError when sum lambda(X)/n exceeds 1.
std::vector<ConvergenceRow> convergence_report(const PoissonIntensities& intensities,
                                               std::span<const std::int64_t> trial_counts,
                                               std::int64_t box);

/// Per-event truncation box: smallest K_x with Poisson(lambda_x) upper tail
/// below delta/N. Full-support sums truncated to this box capture at least
/// 1 - delta of the mass.
std::vector<std::int64_t> truncation_box(const PoissonIntensities& intensities,
                                         double delta = 1e-12);

}  // namespace eventodist
