#include "eventodist/json_io.hpp"

#include <charconv>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

namespace eventodist {

namespace {

// SAX handler for the flat distribution schema. It keeps the unparsed text
// of every number so rational mode can convert decimal literals exactly;
// a DOM pass would round them through double first.
struct RawDocument {
  std::vector<std::string> events;
  std::string value_field;  // "p" or "lambda"
  std::vector<std::pair<std::string, std::string>> entries;
};

class RawDocumentSax : public nlohmann::json_sax<nlohmann::json> {
 public:
  explicit RawDocumentSax(RawDocument& doc) : doc_(doc) {}

  bool null() override { return fail("null is not a valid value"); }
  bool boolean(bool) override { return fail("booleans are not valid values"); }
  bool binary(nlohmann::json::binary_t&) override { return fail("unexpected binary value"); }

  bool number_integer(number_integer_t value) override {
    return number_text(std::to_string(value));
  }
  bool number_unsigned(number_unsigned_t value) override {
    return number_text(std::to_string(value));
  }
  bool number_float(number_float_t, const string_t& raw) override { return number_text(raw); }

  bool string(string_t& value) override {
    if (state_ == State::events_array) {
      doc_.events.push_back(value);
      return true;
    }
    return fail("unexpected string value");
  }

  bool start_object(std::size_t) override {
    if (state_ == State::start) {
      state_ = State::top;
      return true;
    }
    if (state_ == State::expect_values_object) {
      state_ = State::values_object;
      return true;
    }
    return fail("unexpected nested object");
  }

  bool key(string_t& name) override {
    if (state_ == State::top) {
      if (name == "events") {
        if (seen_events_) return fail("duplicate field \"events\"");
        seen_events_ = true;
        state_ = State::expect_events_array;
        return true;
      }
      if (name == "p" || name == "lambda") {
        if (!doc_.value_field.empty()) {
          return fail("duplicate value field \"" + name + "\"");
        }
        doc_.value_field = name;
        state_ = State::expect_values_object;
        return true;
      }
      return fail("unknown field \"" + name + "\" (expected \"events\" and \"p\" or \"lambda\")");
    }
    if (state_ == State::values_object) {
      current_key_ = name;
      return true;
    }
    return fail("unexpected key \"" + name + "\"");
  }

  bool end_object() override {
    if (state_ == State::values_object) {
      state_ = State::top;
      return true;
    }
    if (state_ == State::top) {
      state_ = State::done;
      return true;
    }
    return fail("unexpected end of object");
  }

  bool start_array(std::size_t) override {
    if (state_ == State::expect_events_array) {
      state_ = State::events_array;
      return true;
    }
    return fail("unexpected array");
  }

  bool end_array() override {
    if (state_ == State::events_array) {
      state_ = State::top;
      return true;
    }
    return fail("unexpected end of array");
  }

  bool parse_error(std::size_t, const std::string&,
                   const nlohmann::json::exception& ex) override {
    throw ValidationError(ex.what());  // carries line and column
  }

 private:
  enum class State {
    start,
    top,
    expect_events_array,
    events_array,
    expect_values_object,
    values_object,
    done,
  };

  bool number_text(std::string raw) {
    if (state_ != State::values_object) return fail("unexpected number");
    doc_.entries.emplace_back(std::move(current_key_), std::move(raw));
    return true;
  }

  [[noreturn]] bool fail(const std::string& message) const {
    std::string where;
    if (state_ == State::values_object && !current_key_.empty()) {
      where = doc_.value_field + "[\"" + current_key_ + "\"]: ";
    } else if (state_ == State::events_array) {
      where = "events: ";
    }
    throw ValidationError(where + message);
  }

  RawDocument& doc_;
  State state_ = State::start;
  std::string current_key_;
  bool seen_events_ = false;
};

RawDocument parse_raw(std::string_view text) {
  RawDocument doc;
  RawDocumentSax sax(doc);
  nlohmann::json::sax_parse(text, &sax);
  if (doc.events.empty()) {
    throw ValidationError("field \"events\" is missing or empty");
  }
  if (doc.value_field.empty()) {
    throw ValidationError("value field \"p\" or \"lambda\" is missing");
  }
  return doc;
}

struct IndexedEntries {
  EventSet events;
  std::vector<std::optional<std::string>> raw_by_mask;
};

IndexedEntries index_entries(const RawDocument& doc, std::string_view expected_field) {
  if (doc.value_field != expected_field) {
    throw ValidationError("expected value field \"" + std::string(expected_field) +
                          "\", found \"" + doc.value_field + "\"");
  }
  EventSet events(doc.events);
  std::vector<std::optional<std::string>> raw(events.subset_count());
  for (const auto& [key, number] : doc.entries) {
    SubsetMask mask;
    try {
      mask = events.subset_from_key(key);
    } catch (const Error& e) {
      throw ValidationError(doc.value_field + "[\"" + key + "\"]: " + e.what());
    }
    if (raw[mask]) {
      throw ValidationError(doc.value_field + "[\"" + key + "\"]: duplicate subset key");
    }
    raw[mask] = number;
  }
  return {std::move(events), std::move(raw)};
}

double parse_double(const std::string& field, const std::string& key, const std::string& raw) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
    throw ValidationError(field + "[\"" + key + "\"]: cannot parse number \"" + raw + "\"");
  }
  return value;
}

template <class T>
std::vector<T> materialize(const IndexedEntries& indexed, const std::string& field,
                           bool lenient, bool skip_empty_set) {
  std::vector<T> values(indexed.events.subset_count() - (skip_empty_set ? 1 : 0));
  const SubsetMask first = skip_empty_set ? 1 : 0;
  for (SubsetMask m = first; m < indexed.events.subset_count(); ++m) {
    const auto& raw = indexed.raw_by_mask[m];
    if (!raw) {
      if (!lenient) {
        throw ValidationError(field + ": missing subset key \"" +
                              indexed.events.subset_key(m) +
                              "\" (strict mode requires every subset)");
      }
      values[m - first] = T{};
      continue;
    }
    const std::string key = indexed.events.subset_key(m);
    if constexpr (std::is_same_v<T, double>) {
      values[m - first] = parse_double(field, key, *raw);
    } else {
      try {
        values[m - first] = rational_from_decimal(*raw);
      } catch (const Error& e) {
        throw ValidationError(field + "[\"" + key + "\"]: " + e.what());
      }
    }
  }
  return values;
}

}  // namespace

EventologicalDistribution load_distribution(std::string_view json_text,
                                            const JsonOptions& options) {
  const RawDocument doc = parse_raw(json_text);
  IndexedEntries indexed = index_entries(doc, "p");
  auto values = materialize<double>(indexed, "p", options.lenient, false);
  return EventologicalDistribution(std::move(indexed.events), std::move(values),
                                   options.renormalize);
}

RationalEventologicalDistribution load_distribution_rational(std::string_view json_text,
                                                             const JsonOptions& options) {
  const RawDocument doc = parse_raw(json_text);
  IndexedEntries indexed = index_entries(doc, "p");
  auto values = materialize<Rational>(indexed, "p", options.lenient, false);
  return RationalEventologicalDistribution(std::move(indexed.events), std::move(values),
                                           options.renormalize);
}

PoissonIntensities load_intensities(std::string_view json_text, const JsonOptions& options) {
  const RawDocument doc = parse_raw(json_text);
  IndexedEntries indexed = index_entries(doc, "lambda");
  if (indexed.raw_by_mask[0]) {
    throw ValidationError("lambda[\"\"]: the empty set carries no intensity");
  }
  auto values = materialize<double>(indexed, "lambda", options.lenient, true);
  return PoissonIntensities(std::move(indexed.events), std::move(values));
}

}  // namespace eventodist
