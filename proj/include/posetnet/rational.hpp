#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

#include "posetnet/error.hpp"

namespace posetnet {

/// Exact scalar type for operator coefficients. Norm estimation is the only
/// place values leave the rationals.
using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) { return boost::rational_cast<double>(r); }

inline std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "n" or "n/d".
inline Rat parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rat(std::stoll(text));
    long long num = std::stoll(text.substr(0, slash));
    long long den = std::stoll(text.substr(slash + 1));
    if (den == 0) fail(ErrorCode::input_error, "zero denominator in '" + text + "'");
    return Rat(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::input_error, "malformed rational '" + text + "'");
  }
}

}  // namespace posetnet
