#include "cellgrow/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cellgrow {

std::string format_roundtrip(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_roundtrip: conversion failed");
  }
  return {buf.data(), end};
}

std::string format_fixed(double value, int significant) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("format_fixed: non-finite value");
  }
  int decimals = significant;
  if (value != 0.0) {
    const int int_digits =
        static_cast<int>(std::floor(std::log10(std::abs(value)))) + 1;
    decimals = significant - int_digits;
    if (decimals < 0) {
      decimals = 0;
    }
  } else {
    decimals = significant - 1;
  }
  std::vector<char> buf(static_cast<std::size_t>(decimals) + 350);
  auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value,
                    std::chars_format::fixed, decimals);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_fixed: conversion failed");
  }
  std::string out(buf.data(), end);
  if (out == "-0" || out.find_first_not_of("-0.") == std::string::npos) {
    // Drop the sign of negative values that round to zero.
    if (!out.empty() && out.front() == '-') {
      out.erase(out.begin());
    }
  }
  return out;
}

} // namespace cellgrow
