#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace eventodist {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument violated an operation's contract (wrong dimension, empty
/// subset, negative count, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An event label is not a member of the event set in use.
class LabelNotFound : public Error {
 public:
  LabelNotFound(std::string label, const std::string& what)
      : Error(what), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

/// Construction-time or input-validation failure (bad probabilities,
/// malformed JSON, missing subset keys, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A marginal probability is 0 or 1 where a positive variance is required.
class DegenerateEventError : public Error {
 public:
  using Error::Error;
};

/// A terrace probability required in a denominator vanished; carries the
/// canonical key of the offending terrace.
class SingularDistributionError : public Error {
 public:
  SingularDistributionError(std::string terrace_key, const std::string& what)
      : Error(what), terrace_key_(std::move(terrace_key)) {}
  const std::string& terrace_key() const noexcept { return terrace_key_; }

 private:
  std::string terrace_key_;
};

/// A requested trial count cannot host the given intensities as
/// probabilities (sum of lambda(X)/n exceeds 1).
class InfeasibleTrialCountError : public Error {
 public:
  InfeasibleTrialCountError(std::int64_t trials, const std::string& what)
      : Error(what), trials_(trials) {}
  std::int64_t trials() const noexcept { return trials_; }

 private:
  std::int64_t trials_;
};

}  // namespace eventodist
