#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace eventodist {

/// Observable counts: one nonnegative entry per event, canonical order.
struct CountVector {
  std::vector<std::int64_t> n;

  CountVector() = default;
  explicit CountVector(std::vector<std::int64_t> counts) : n(std::move(counts)) {}

  std::size_t size() const noexcept { return n.size(); }
  std::int64_t operator[](std::size_t i) const { return n[i]; }

  auto operator<=>(const CountVector&) const = default;
};

/// Latent per-terrace counts n(X), dense by subset bitmask. Slot 0 (the
/// empty set) is meaningful only when includes_empty is set: binomial
/// contexts carry n(empty), Poisson contexts do not.
struct TerraceCountVector {
  std::vector<std::int64_t> by_mask;  // size 2^N
  bool includes_empty = false;

  std::size_t event_count() const noexcept {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < by_mask.size()) ++n;
    return n;
  }

  std::int64_t count(std::size_t mask) const { return by_mask[mask]; }

  /// Total count over represented subsets (slot 0 included only when
  /// includes_empty).
  std::int64_t total() const noexcept {
    std::int64_t sum = includes_empty ? by_mask[0] : 0;
    for (std::size_t m = 1; m < by_mask.size(); ++m) sum += by_mask[m];
    return sum;
  }

  /// Folds the terrace counts to the induced count vector:
  /// n_x = sum over subsets X containing x of n(X).
  CountVector to_count_vector() const {
    CountVector out(std::vector<std::int64_t>(event_count(), 0));
    for (std::size_t m = 1; m < by_mask.size(); ++m) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (m & (std::size_t{1} << i)) out.n[i] += by_mask[m];
      }
    }
    return out;
  }

  auto operator<=>(const TerraceCountVector&) const = default;
};

}  // namespace eventodist
