#include "eventodist/event_set.hpp"

#include <algorithm>

#include "eventodist/errors.hpp"

namespace eventodist {

EventSet::EventSet(std::vector<std::string> labels, std::size_t max_events)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("event set must contain at least one event");
  if (max_events > 8 * sizeof(SubsetMask)) {
    throw ValidationError("max_events exceeds the subset mask width");
  }
  if (labels_.size() > max_events) {
    throw ValidationError("event set has " + std::to_string(labels_.size()) +
                          " events, exceeding the cap of " + std::to_string(max_events));
  }
  for (const auto& label : labels_) {
    if (label.empty()) throw ValidationError("event labels must be non-empty");
    if (label.find(',') != std::string::npos) {
      throw ValidationError("event label \"" + label +
                            "\" contains ',', which subset keys reserve as a separator");
    }
  }
  std::sort(labels_.begin(), labels_.end());
  if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
    throw ValidationError("event labels must be pairwise distinct");
  }
}

std::size_t EventSet::index_of(std::string_view label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    throw LabelNotFound(std::string(label),
                        "event \"" + std::string(label) + "\" is not in the event set");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

bool EventSet::contains(std::string_view label) const noexcept {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

SubsetMask EventSet::singleton(std::string_view label) const {
  return SubsetMask{1} << index_of(label);
}

SubsetMask EventSet::subset_of(std::span<const std::string_view> labels) const {
  SubsetMask mask = 0;
  for (const auto& label : labels) mask |= singleton(label);
  return mask;
}

std::string EventSet::subset_key(SubsetMask subset) const {
  std::string key;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (subset & (SubsetMask{1} << i)) {
      if (!key.empty()) key += ',';
      key += labels_[i];
    }
  }
  return key;
}

SubsetMask EventSet::subset_from_key(std::string_view key) const {
  if (key.empty()) return 0;
  SubsetMask mask = 0;
  std::size_t last_index = 0;
  bool first = true;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = key.find(',', start);
    const std::string_view part =
        key.substr(start, comma == std::string_view::npos ? comma : comma - start);
    const std::size_t index = index_of(part);
    if (!first && index <= last_index) {
      throw ValidationError("subset key \"" + std::string(key) +
                            "\" is not in canonical label order");
    }
    mask |= SubsetMask{1} << index;
    last_index = index;
    first = false;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return mask;
}

}  // namespace eventodist
