#include <doctest.h>

#include <algorithm>
#include <random>

#include "eventodist/lattice.hpp"
#include "oracle/oracle.hpp"

using namespace eventodist;

namespace {

ConstraintSystem make_system(std::size_t n_events, std::vector<std::int64_t> target,
                             std::optional<std::int64_t> cap = std::nullopt) {
  static const std::vector<std::string> pool = {"a", "b", "c", "d"};
  return ConstraintSystem(EventSet({pool.begin(), pool.begin() + n_events}),
                          CountVector(std::move(target)), cap);
}

bool satisfies(const ConstraintSystem& cs, const TerraceCountVector& s) {
  const auto induced = s.to_count_vector();
  if (induced != cs.target) return false;
  std::int64_t total = 0;
  for (std::size_t m = 1; m < s.by_mask.size(); ++m) {
    if (s.by_mask[m] < 0) return false;
    total += s.by_mask[m];
  }
  if (cs.total_cap) {
    if (total > *cs.total_cap) return false;
    if (!s.includes_empty || s.by_mask[0] != *cs.total_cap - total) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("zero target has exactly the zero solution") {
  const auto capped = make_system(3, {0, 0, 0}, 5);
  const auto solutions = all_solutions(capped);
  REQUIRE(solutions.size() == 1);
  CHECK(solutions[0].includes_empty);
  CHECK(solutions[0].by_mask[0] == 5);  // n(empty) absorbs all trials
  for (std::size_t m = 1; m < solutions[0].by_mask.size(); ++m) {
    CHECK(solutions[0].by_mask[m] == 0);
  }

  const auto uncapped = all_solutions(make_system(3, {0, 0, 0}));
  REQUIRE(uncapped.size() == 1);
  CHECK_FALSE(uncapped[0].includes_empty);
  CHECK(uncapped[0].total() == 0);
}

TEST_CASE("bivariate solutions trace the Frechet interval") {
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (std::int64_t nx = 0; nx <= n; ++nx) {
      for (std::int64_t ny = 0; ny <= n; ++ny) {
        const auto solutions = all_solutions(make_system(2, {nx, ny}, n));
        const std::int64_t lo = std::max<std::int64_t>(0, nx + ny - n);
        const std::int64_t hi = std::min(nx, ny);
        CHECK(static_cast<std::int64_t>(solutions.size()) == hi - lo + 1);
        for (const auto& s : solutions) {
          const std::int64_t k = s.by_mask[3];
          CHECK(k >= lo);
          CHECK(k <= hi);
          CHECK(s.by_mask[1] == nx - k);
          CHECK(s.by_mask[2] == ny - k);
          CHECK(s.by_mask[0] == n - nx - ny + k);
        }
      }
    }
  }
}

TEST_CASE("solution counts") {
  CHECK(solution_count(make_system(2, {0, 0}, 4)) == 1);
  CHECK(solution_count(make_system(2, {2, 2}, 3)) == 2);  // min{2,2} - max{0,1} + 1
  CHECK(solution_count(make_system(3, {1, 1, 1})) ==
        static_cast<std::int64_t>(oracle::brute_lattice_solutions(make_system(3, {1, 1, 1})).size()));
}

TEST_CASE("infeasible targets yield an empty stream, not an error") {
  CHECK(solution_count(make_system(2, {5, 1}, 3)) == 0);
  CHECK(all_solutions(make_system(2, {5, 1}, 3)).empty());
}

TEST_CASE("construction validates shapes") {
  CHECK_THROWS_AS(make_system(2, {1}), InvalidArgument);
  CHECK_THROWS_AS(make_system(2, {1, -1}), InvalidArgument);
  CHECK_THROWS_AS(make_system(2, {1, 1}, -1), InvalidArgument);
}

TEST_CASE("enumeration matches the exhaustive grid oracle") {
  const auto check_against_oracle = [](const ConstraintSystem& cs) {
    auto mine = all_solutions(cs);
    std::sort(mine.begin(), mine.end());
    CHECK(mine == oracle::brute_lattice_solutions(cs));
    for (const auto& s : mine) CHECK(satisfies(cs, s));
  };

  // exhaustive over the small domain for one and two events
  for (std::int64_t nx = 0; nx <= 4; ++nx) {
    check_against_oracle(make_system(1, {nx}));
    for (std::int64_t cap = 0; cap <= 8; ++cap) check_against_oracle(make_system(1, {nx}, cap));
    for (std::int64_t ny = 0; ny <= 4; ++ny) {
      check_against_oracle(make_system(2, {nx, ny}));
      for (std::int64_t cap = 0; cap <= 8; ++cap) {
        check_against_oracle(make_system(2, {nx, ny}, cap));
      }
    }
  }

  // sampled for three events
  std::mt19937_64 rng(201);
  std::uniform_int_distribution<std::int64_t> target_value(0, 4);
  std::uniform_int_distribution<std::int64_t> cap_value(0, 8);
  for (int i = 0; i < 60; ++i) {
    std::vector<std::int64_t> target = {target_value(rng), target_value(rng),
                                        target_value(rng)};
    std::optional<std::int64_t> cap;
    if (i % 2 == 0) cap = cap_value(rng);
    check_against_oracle(make_system(3, target, cap));
  }
}

TEST_CASE("grid oracle guard fails loudly") {
  // 4 events, targets of 30: the candidate grid blows past 10^7
  const auto cs = make_system(4, {30, 30, 30, 30});
  CHECK_THROWS_AS(oracle::brute_lattice_solutions(cs), oracle::TooLargeError);
}

TEST_CASE("enumeration order is deterministic") {
  const auto cs = make_system(3, {2, 3, 1}, 6);
  CHECK(all_solutions(cs) == all_solutions(cs));
}

TEST_CASE("per-subset caps prune branches") {
  auto cs = make_system(2, {1, 1}, 2);
  cs.subset_max.assign(4, std::numeric_limits<std::int64_t>::max());
  cs.subset_max[3] = 0;  // forbid the joint terrace
  const auto solutions = all_solutions(cs);
  REQUIRE(solutions.size() == 1);
  CHECK(solutions[0].by_mask[3] == 0);
  CHECK(solutions[0].by_mask[1] == 1);
  CHECK(solutions[0].by_mask[2] == 1);
}

TEST_CASE("every visited solution satisfies its system exactly") {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::int64_t> target_value(0, 4);
  for (int i = 0; i < 20; ++i) {
    std::vector<std::int64_t> target = {target_value(rng), target_value(rng), target_value(rng)};
    const auto cs = make_system(3, target, i % 2 ? std::optional<std::int64_t>(8) : std::nullopt);
    for_each_solution(cs, [&](const TerraceCountVector& s) { CHECK(satisfies(cs, s)); });
  }
}

}  // TEST_SUITE
