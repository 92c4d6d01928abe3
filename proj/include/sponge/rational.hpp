#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace sponge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "num/den" or "num" (optionally signed). Throws ValidationError on
// malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical serialization: "num" for integers, "num/den" otherwise.
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, unsigned n) {
  Rational out(1);
  for (unsigned i = 0; i < n; ++i) out *= base;
  return out;
}

// floor(x) as an arbitrary-precision integer.
BigInt rational_floor(const Rational& x);

// True when r == 1 / 2^k for some k >= 0.
bool is_dyadic_unit_fraction(const Rational& r);

}  // namespace sponge
