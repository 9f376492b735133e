#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eventodist {

/// A subset of events encoded as a bitmask over the canonical label order.
/// Bit i set <=> the i-th label (lexicographically) is in the subset.
/// Mask 0 is the empty set.
using SubsetMask = std::uint32_t;

inline constexpr std::size_t kDefaultMaxEvents = 16;

/// Ordered finite set of event labels. The canonical order is lexicographic;
/// subsets are addressed by bitmask over that order. Immutable.
class EventSet {
 public:
  /// Labels must be distinct, non-empty and free of ',' (subset keys are
  /// comma-joined). 1 <= N <= max_events; storage elsewhere is O(2^N).
  explicit EventSet(std::vector<std::string> labels,
                    std::size_t max_events = kDefaultMaxEvents);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t subset_count() const noexcept { return std::size_t{1} << labels_.size(); }
  SubsetMask full_mask() const noexcept {
    return static_cast<SubsetMask>(subset_count() - 1);
  }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }

  /// Index of a label in canonical order; throws LabelNotFound.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const noexcept;

  SubsetMask singleton(std::string_view label) const;
  SubsetMask subset_of(std::span<const std::string_view> labels) const;

  /// Canonical key of a subset: comma-joined labels in canonical order,
  /// "" for the empty set.
  std::string subset_key(SubsetMask subset) const;

  /// Parses a canonical subset key. Rejects unknown labels, duplicates and
  /// non-canonical orderings so that keys are unambiguous.
  SubsetMask subset_from_key(std::string_view key) const;

  bool operator==(const EventSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

}  // namespace eventodist
