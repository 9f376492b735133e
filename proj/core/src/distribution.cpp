#include "eventodist/distribution.hpp"

#include <cmath>

namespace eventodist {

EventologicalDistribution to_double_distribution(const RationalEventologicalDistribution& d) {
  std::vector<double> p(d.probabilities().size());
  for (std::size_t m = 0; m < p.size(); ++m) p[m] = to_double(d.p(static_cast<SubsetMask>(m)));
  return EventologicalDistribution(d.events(), std::move(p));
}

PoissonIntensities::PoissonIntensities(EventSet events, std::vector<double> intensities)
    : events_(std::move(events)) {
  const std::size_t nonempty = events_.subset_count() - 1;
  if (intensities.size() != nonempty) {
    throw ValidationError("intensity vector has " + std::to_string(intensities.size()) +
                          " entries, expected 2^N - 1 = " + std::to_string(nonempty));
  }
  lambda_by_mask_.assign(events_.subset_count(), 0.0);
  for (std::size_t i = 0; i < nonempty; ++i) {
    const SubsetMask mask = static_cast<SubsetMask>(i + 1);
    if (!std::isfinite(intensities[i]) || intensities[i] < 0.0) {
      throw ValidationError("lambda[\"" + events_.subset_key(mask) +
                            "\"] must be finite and nonnegative");
    }
    lambda_by_mask_[mask] = intensities[i];
    total_ += intensities[i];
  }
  if (!std::isfinite(total_)) {
    throw ValidationError("total intensity overflows to infinity");
  }
}

double PoissonIntensities::lambda(SubsetMask subset) const {
  if (subset == 0) throw InvalidArgument("intensities are defined for nonempty subsets only");
  if (subset > events_.full_mask()) {
    throw InvalidArgument("subset mask out of range for this event set");
  }
  return lambda_by_mask_[subset];
}

double lambda_marginal(const PoissonIntensities& li, std::size_t event_index) {
  const SubsetMask bit = SubsetMask{1} << event_index;
  double sum = 0.0;
  for (SubsetMask m = 1; m < li.events().subset_count(); ++m) {
    if (m & bit) sum += li.lambda(m);
  }
  return sum;
}

double lambda_marginal(const PoissonIntensities& li, std::string_view x) {
  return lambda_marginal(li, li.events().index_of(x));
}

double lambda_joint(const PoissonIntensities& li, std::size_t x, std::size_t y) {
  if (x == y) throw InvalidArgument("lambda_joint requires two distinct events");
  const SubsetMask pair = (SubsetMask{1} << x) | (SubsetMask{1} << y);
  double sum = 0.0;
  for (SubsetMask m = 1; m < li.events().subset_count(); ++m) {
    if ((m & pair) == pair) sum += li.lambda(m);
  }
  return sum;
}

double lambda_joint(const PoissonIntensities& li, std::string_view x, std::string_view y) {
  return lambda_joint(li, li.events().index_of(x), li.events().index_of(y));
}

}  // namespace eventodist
