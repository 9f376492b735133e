#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace eventodist {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) noexcept { return x; }
inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

/// Exact conversion of a decimal literal ("0.4", "-1.25e-3") to a rational.
/// Throws ValidationError on malformed input.
Rational rational_from_decimal(std::string_view text);

BigInt factorial_big(std::int64_t n);

/// Compensated (Kahan) accumulator for sums of many terms of mixed magnitude.
class KahanSum {
 public:
  void add(double x) noexcept {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const noexcept { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Streaming log-sum-exp: folds log-terms without materializing them and
/// without overflow, tracking the running maximum. Empty stream -> -inf.
class LogSumExp {
 public:
  void add(double log_term) noexcept {
    if (std::isinf(log_term) && log_term < 0) return;
    if (log_term <= max_) {
      scaled_ += std::exp(log_term - max_);
    } else {
      scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double value() const noexcept {
    if (std::isinf(max_) && max_ < 0) return max_;
    return max_ + std::log(scaled_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double value);

/// Fixed 17-significant-digit formatting (used by table emitters).
std::string format_probability(double value);

}  // namespace eventodist
