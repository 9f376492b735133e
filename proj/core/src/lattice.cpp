#include "eventodist/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <limits>
#include <numeric>

#include "eventodist/errors.hpp"

namespace eventodist {

ConstraintSystem::ConstraintSystem(EventSet ev, CountVector tgt,
                                   std::optional<std::int64_t> cap)
    : events(std::move(ev)), target(std::move(tgt)), total_cap(cap) {
  if (target.size() != events.size()) {
    throw InvalidArgument("target has " + std::to_string(target.size()) +
                          " entries, expected " + std::to_string(events.size()));
  }
  for (auto v : target.n) {
    if (v < 0) throw InvalidArgument("target counts must be nonnegative");
  }
  if (total_cap && *total_cap < 0) throw InvalidArgument("total cap must be nonnegative");
}

namespace {

struct Walk {
  // Nonempty subsets in traversal order: descending cardinality, ascending
  // mask on ties. Larger subsets consume several marginals per unit, so the
  // residual bounds tighten earliest.
  std::vector<SubsetMask> order;
  std::vector<SubsetMask> cover;    // union of order[i..]; cover[size] = 0
  std::vector<int> max_card;        // max popcount over order[i..]; 0 at end
  std::vector<std::int64_t> residual;
  std::vector<std::int64_t> subset_max;
  std::int64_t assigned = 0;
  std::optional<std::int64_t> cap;
  std::size_t n_events = 0;
  TerraceCountVector buffer;
  const SolutionVisitor* visit = nullptr;

  void descend(std::size_t depth) {
    if (depth == order.size()) {
      // Coverage pruning guarantees residuals are exhausted here.
      assert(std::all_of(residual.begin(), residual.end(),
                         [](std::int64_t r) { return r == 0; }));
      buffer.by_mask[0] = cap ? *cap - assigned : 0;
      (*visit)(buffer);
      return;
    }
    const SubsetMask subset = order[depth];
    const SubsetMask later = cover[depth + 1];

    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    // Events whose last covering subset is this one force n(X) exactly.
    std::int64_t forced = -1;
    for (std::size_t x = 0; x < n_events; ++x) {
      const SubsetMask bit = SubsetMask{1} << x;
      if (!(subset & bit)) continue;
      hi = std::min(hi, residual[x]);
      if (!(later & bit)) {
        if (forced >= 0 && forced != residual[x]) return;
        forced = residual[x];
      }
    }
    if (cap) hi = std::min(hi, *cap - assigned);
    if (!subset_max.empty()) hi = std::min(hi, subset_max[subset]);
    if (hi < 0 || (forced >= 0 && forced > hi)) return;

    const std::int64_t lo = forced >= 0 ? forced : 0;
    const std::int64_t start = forced >= 0 ? forced : hi;
    for (std::int64_t value = start; value >= lo; --value) {
      for (std::size_t x = 0; x < n_events; ++x) {
        if (subset & (SubsetMask{1} << x)) residual[x] -= value;
      }
      assigned += value;

      bool feasible = true;
      for (std::size_t x = 0; x < n_events && feasible; ++x) {
        if (residual[x] > 0 && !(later & (SubsetMask{1} << x))) feasible = false;
      }
      if (feasible && cap) {
        // Admissible lower bound on the mass the remaining subsets must
        // place: each unit covers at most max_card events, and no single
        // marginal can be finished faster than one unit per count.
        std::int64_t residual_sum = 0;
        std::int64_t residual_max = 0;
        for (auto r : residual) {
          residual_sum += r;
          residual_max = std::max(residual_max, r);
        }
        const int card = max_card[depth + 1];
        const std::int64_t future_min =
            card == 0 ? residual_sum
                      : std::max(residual_max, (residual_sum + card - 1) / card);
        if (assigned + future_min > *cap) feasible = false;
      }
      if (feasible) {
        buffer.by_mask[subset] = value;
        descend(depth + 1);
        buffer.by_mask[subset] = 0;
      }

      assigned -= value;
      for (std::size_t x = 0; x < n_events; ++x) {
        if (subset & (SubsetMask{1} << x)) residual[x] += value;
      }
    }
  }
};

}  // namespace

void for_each_solution(const ConstraintSystem& cs, const SolutionVisitor& visit) {
  const std::size_t n_events = cs.events.size();
  if (cs.total_cap) {
    for (auto v : cs.target.n) {
      if (v > *cs.total_cap) return;  // infeasible target: empty stream
    }
  }

  Walk walk;
  walk.n_events = n_events;
  walk.cap = cs.total_cap;
  walk.residual = cs.target.n;
  walk.subset_max = cs.subset_max;
  walk.visit = &visit;
  walk.buffer.by_mask.assign(cs.events.subset_count(), 0);
  walk.buffer.includes_empty = cs.total_cap.has_value();

  walk.order.resize(cs.events.subset_count() - 1);
  std::iota(walk.order.begin(), walk.order.end(), SubsetMask{1});
  std::stable_sort(walk.order.begin(), walk.order.end(), [](SubsetMask a, SubsetMask b) {
    return std::popcount(a) > std::popcount(b);
  });

  walk.cover.assign(walk.order.size() + 1, 0);
  walk.max_card.assign(walk.order.size() + 1, 0);
  for (std::size_t i = walk.order.size(); i-- > 0;) {
    walk.cover[i] = walk.cover[i + 1] | walk.order[i];
    walk.max_card[i] = std::max(walk.max_card[i + 1], std::popcount(walk.order[i]));
  }

  // Events that no subset can serve must already be satisfied.
  for (std::size_t x = 0; x < n_events; ++x) {
    if (walk.residual[x] > 0 && !(walk.cover[0] & (SubsetMask{1} << x))) return;
  }

  walk.descend(0);
}

std::int64_t solution_count(const ConstraintSystem& cs) {
  std::int64_t count = 0;
  for_each_solution(cs, [&](const TerraceCountVector&) { ++count; });
  return count;
}

std::vector<TerraceCountVector> all_solutions(const ConstraintSystem& cs) {
  std::vector<TerraceCountVector> out;
  for_each_solution(cs, [&](const TerraceCountVector& s) { out.push_back(s); });
  return out;
}

}  // namespace eventodist
