#include "eventodist/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eventodist/lattice.hpp"

namespace eventodist {

namespace {

void validate_counts(const PoissonMvSpec& spec, const CountVector& counts) {
  if (counts.size() != spec.events().size()) {
    throw InvalidArgument("count vector has " + std::to_string(counts.size()) +
                          " entries, expected " + std::to_string(spec.events().size()));
  }
  for (auto v : counts.n) {
    if (v < 0) throw InvalidArgument("count vector entries must be nonnegative");
  }
}

// log of prod over nonempty X of lambda(X)^n(X) / n(X)!; -inf when a
// zero-intensity terrace carries a positive count.
double log_intensity_product(const PoissonIntensities& li,
                             std::span<const std::int64_t> by_mask) {
  double log_product = 0.0;
  for (std::size_t m = 1; m < by_mask.size(); ++m) {
    const std::int64_t c = by_mask[m];
    if (c == 0) continue;
    const double lambda = li.lambda(static_cast<SubsetMask>(m));
    if (lambda == 0.0) return -std::numeric_limits<double>::infinity();
    log_product += static_cast<double>(c) * std::log(lambda) -
                   std::lgamma(static_cast<double>(c) + 1.0);
  }
  return log_product;
}

ConstraintSystem poisson_constraints(const PoissonIntensities& li, const CountVector& counts) {
  ConstraintSystem cs(li.events(), counts, std::nullopt);
  cs.subset_max.assign(li.events().subset_count(),
                       std::numeric_limits<std::int64_t>::max());
  for (SubsetMask m = 1; m < li.events().subset_count(); ++m) {
    if (li.lambda(m) == 0.0) cs.subset_max[m] = 0;
  }
  return cs;
}

double pmf_bivariate(const PoissonMvSpec& spec, std::int64_t nx, std::int64_t ny) {
  const auto& li = spec.intensities;
  KahanSum sum;
  for (std::int64_t k = 0; k <= std::min(nx, ny); ++k) {
    const std::int64_t cells[4] = {0, nx - k, ny - k, k};
    const double log_term = log_intensity_product(li, cells);
    if (!std::isinf(log_term)) sum.add(std::exp(log_term));
  }
  return std::exp(-li.total()) * sum.value();
}

}  // namespace

double pmf_lattice(const PoissonMvSpec& spec, const CountVector& counts) {
  validate_counts(spec, counts);
  const auto cs = poisson_constraints(spec.intensities, counts);
  KahanSum sum;
  for_each_solution(cs, [&](const TerraceCountVector& s) {
    const double log_term = log_intensity_product(spec.intensities, s.by_mask);
    if (!std::isinf(log_term)) sum.add(std::exp(log_term));
  });
  return std::exp(-spec.intensities.total()) * sum.value();
}

double pmf(const PoissonMvSpec& spec, const CountVector& counts) {
  validate_counts(spec, counts);
  if (spec.events().size() == 2) return pmf_bivariate(spec, counts[0], counts[1]);
  return pmf_lattice(spec, counts);
}

double marginal_pmf(const PoissonMvSpec& spec, std::size_t event_index, std::int64_t n_x) {
  if (event_index >= spec.events().size()) {
    throw InvalidArgument("event index out of range");
  }
  if (n_x < 0) throw InvalidArgument("count must be nonnegative");
  const double lambda_x = lambda_marginal(spec.intensities, event_index);
  if (lambda_x == 0.0) return n_x == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(n_x) * std::log(lambda_x) - lambda_x -
                  std::lgamma(static_cast<double>(n_x) + 1.0));
}

double marginal_pmf(const PoissonMvSpec& spec, std::string_view x, std::int64_t n_x) {
  return marginal_pmf(spec, spec.events().index_of(x), n_x);
}

std::vector<double> mean_vector(const PoissonMvSpec& spec) {
  std::vector<double> mean(spec.events().size());
  for (std::size_t i = 0; i < mean.size(); ++i) {
    mean[i] = lambda_marginal(spec.intensities, i);
  }
  return mean;
}

SquareMatrix<double> covariance_matrix(const PoissonMvSpec& spec) {
  const std::size_t n_events = spec.events().size();
  SquareMatrix<double> cov(n_events);
  for (std::size_t i = 0; i < n_events; ++i) {
    cov.at(i, i) = lambda_marginal(spec.intensities, i);
    for (std::size_t j = i + 1; j < n_events; ++j) {
      const double v = lambda_joint(spec.intensities, i, j);
      cov.at(i, j) = v;
      cov.at(j, i) = v;
    }
  }
  return cov;
}

double approximate_binomial_pmf(const BinomialMvSpec& spec, const CountVector& counts) {
  detail::validate_counts(spec, counts);
  if (detail::any_count_exceeds_trials(spec, counts)) return 0.0;

  const double n = static_cast<double>(spec.trials);
  KahanSum occupied_mass;  // sum over nonempty X of p(X)
  for (SubsetMask m = 1; m < spec.dist.events().subset_count(); ++m) {
    occupied_mass.add(spec.dist.p(m));
  }

  // Same capped, pruned walk as the exact binomial PMF; only the summand
  // changes to the Poisson form with lambda(X) = n p(X).
  const auto cs = detail::binomial_constraints(spec, counts);
  KahanSum sum;
  for_each_solution(cs, [&](const TerraceCountVector& s) {
    double log_term = 0.0;
    for (std::size_t m = 1; m < s.by_mask.size(); ++m) {
      const std::int64_t c = s.by_mask[m];
      if (c == 0) continue;
      const double rate = n * spec.dist.p(static_cast<SubsetMask>(m));
      if (rate == 0.0) return;
      log_term += static_cast<double>(c) * std::log(rate) -
                  std::lgamma(static_cast<double>(c) + 1.0);
    }
    sum.add(std::exp(log_term));
  });
  return std::exp(-n * occupied_mass.value()) * sum.value();
}

std::vector<ConvergenceRow> convergence_report(const PoissonIntensities& intensities,
                                               std::span<const std::int64_t> trial_counts,
                                               std::int64_t box) {
  if (box < 0) throw InvalidArgument("box must be nonnegative");
  std::vector<std::int64_t> trials(trial_counts.begin(), trial_counts.end());
  std::sort(trials.begin(), trials.end());

  const std::size_t n_events = intensities.events().size();
  const std::size_t subsets = intensities.events().subset_count();
  const PoissonMvSpec poisson_spec{intensities};

  std::vector<ConvergenceRow> rows;
  rows.reserve(trials.size());
  for (const std::int64_t n : trials) {
    if (n < 1) throw InvalidArgument("trial counts must be >= 1");
    std::vector<double> p(subsets, 0.0);
    KahanSum occupied;
    for (SubsetMask m = 1; m < subsets; ++m) {
      p[m] = intensities.lambda(m) / static_cast<double>(n);
      occupied.add(p[m]);
    }
    if (occupied.value() > 1.0) {
      throw InfeasibleTrialCountError(
          n, "trial count " + std::to_string(n) +
                 " is too small: intensities sum to " + format_shortest(intensities.total()) +
                 ", so p(X) = lambda(X)/n exceeds total mass 1");
    }
    p[0] = 1.0 - occupied.value();
    const BinomialMvSpec binomial_spec(
        EventologicalDistribution(intensities.events(), std::move(p)), n);

    double sup = 0.0;
    CountVector at(std::vector<std::int64_t>(n_events, 0));
    while (true) {
      const double deviation = std::abs(pmf(binomial_spec, at) - pmf(poisson_spec, at));
      sup = std::max(sup, deviation);
      std::size_t i = 0;
      for (; i < n_events; ++i) {
        if (++at.n[i] <= box) break;
        at.n[i] = 0;
      }
      if (i == n_events) break;
    }
    rows.push_back({n, sup});
  }
  return rows;
}

std::vector<std::int64_t> truncation_box(const PoissonIntensities& intensities, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  const std::size_t n_events = intensities.events().size();
  const double per_event = delta / static_cast<double>(n_events);
  std::vector<std::int64_t> box(n_events, 0);
  for (std::size_t i = 0; i < n_events; ++i) {
    const double lambda_x = lambda_marginal(intensities, i);
    double term = std::exp(-lambda_x);
    double cdf = term;
    std::int64_t k = 0;
    while (1.0 - cdf >= per_event && term > 0.0) {
      ++k;
      term *= lambda_x / static_cast<double>(k);
      cdf += term;
    }
    box[i] = k;
  }
  return box;
}

}  // namespace eventodist
