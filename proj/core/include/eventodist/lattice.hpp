#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "eventodist/count_vector.hpp"
#include "eventodist/event_set.hpp"

namespace eventodist {

/// Marginal constraint system: enumerate all nonnegative integer terrace
/// counts n(X), X nonempty, with n_x = sum over X containing x of n(X) for
/// every event x, and -- when total_cap is present -- sum n(X) <= total_cap
/// (the binomial case, where n(empty) = cap - sum is attached to solutions).
struct ConstraintSystem {
  EventSet events;
  CountVector target;
  std::optional<std::int64_t> total_cap;

  /// Optional per-subset upper bounds, indexed by mask (size 2^N). Used by
  /// PMF evaluation to cut terraces with zero probability out of the search
  /// before the walk descends into them. Empty means unbounded.
  std::vector<std::int64_t> subset_max;

  ConstraintSystem(EventSet ev, CountVector tgt,
                   std::optional<std::int64_t> cap = std::nullopt);
};

using SolutionVisitor = std::function<void(const TerraceCountVector&)>;

/// Visits every solution exactly once, in a deterministic order: depth-first
/// over nonempty subsets sorted by descending cardinality (ascending mask on
/// ties), assigning each n(X) from the top of its feasibility interval
/// downwards. The visited reference aliases an internal buffer; copy it to
/// keep it. Infeasible systems visit nothing.
void for_each_solution(const ConstraintSystem& cs, const SolutionVisitor& visit);

/// Number of solutions for_each_solution would visit.
std::int64_t solution_count(const ConstraintSystem& cs);

/// Materializes the full solution set (test and diagnostic use).
std::vector<TerraceCountVector> all_solutions(const ConstraintSystem& cs);

}  // namespace eventodist
