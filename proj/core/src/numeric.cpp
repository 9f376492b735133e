#include "eventodist/numeric.hpp"

#include <charconv>
#include <cstdlib>

#include "eventodist/errors.hpp"

namespace eventodist {

BigInt factorial_big(std::int64_t n) {
  BigInt f = 1;
  for (std::int64_t k = 2; k <= n; ++k) f *= k;
  return f;
}

Rational rational_from_decimal(std::string_view text) {
  const auto fail = [&] {
    throw ValidationError("not a decimal number: \"" + std::string(text) + "\"");
  };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt mantissa = 0;
  std::int64_t frac_digits = 0;
  bool any_digits = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
    mantissa = mantissa * 10 + (text[i] - '0');
    any_digits = true;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      mantissa = mantissa * 10 + (text[i] - '0');
      ++frac_digits;
      any_digits = true;
    }
  }
  if (!any_digits) fail();
  std::int64_t exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), exponent);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail();
    i = text.size();
  }
  if (i != text.size()) fail();

  Rational value(mantissa);
  const std::int64_t shift = exponent - frac_digits;
  BigInt pow10 = 1;
  for (std::int64_t k = 0; k < (shift < 0 ? -shift : shift); ++k) pow10 *= 10;
  if (shift >= 0) {
    value *= Rational(pow10);
  } else {
    value /= Rational(pow10);
  }
  return negative ? -value : value;
}

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string format_probability(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

}  // namespace eventodist
