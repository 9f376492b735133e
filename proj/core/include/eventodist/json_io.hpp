#pragma once

#include <string>
#include <string_view>

#include "eventodist/distribution.hpp"

namespace eventodist {

// JSON input format for distributions:
//   { "events": ["x","y"], "p": { "": 0.4, "x": 0.2, "y": 0.3, "x,y": 0.1 } }
// Subset keys are comma-joined labels in canonical order; "" is the empty
// set. Strict mode (default) requires all 2^N keys; lenient mode defaults
// absent keys to 0. Intensities use field "lambda" instead of "p" and do not
// admit the "" key.
//
// Rational loading parses the decimal literals exactly (0.4 -> 2/5), so a
// file whose decimals sum to 1 is exactly normalized in rational mode.

struct JsonOptions {
  bool lenient = false;      // absent subset keys default to 0
  bool renormalize = false;  // scale probabilities to sum 1 instead of checking
};

EventologicalDistribution load_distribution(std::string_view json_text,
                                            const JsonOptions& options = {});
RationalEventologicalDistribution load_distribution_rational(std::string_view json_text,
                                                             const JsonOptions& options = {});
PoissonIntensities load_intensities(std::string_view json_text,
                                    const JsonOptions& options = {});

}  // namespace eventodist
