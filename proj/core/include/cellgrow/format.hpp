#pragma once

#include <string>

namespace cellgrow {

/// Shortest decimal text that parses back to the same double.
/// Locale-independent.
std::string format_roundtrip(double value);

/// Fixed notation (no exponent) with `significant` significant digits.
/// Locale-independent.
std::string format_fixed(double value, int significant = 9);

} // namespace cellgrow
