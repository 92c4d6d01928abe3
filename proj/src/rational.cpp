#include "sponge/rational.hpp"

namespace sponge {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ValidationError("empty rational literal");
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(BigInt(text));
    }
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw ValidationError("zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw ValidationError("malformed rational literal '" + text + "'");
  }
}

std::string to_string(const Rational& r) {
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt rational_floor(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (x < 0 && q * denominator(x) != numerator(x)) --q;
  return q;
}

bool is_dyadic_unit_fraction(const Rational& r) {
  if (numerator(r) != 1) return false;
  BigInt den = denominator(r);
  while (den % 2 == 0) den /= 2;
  return den == 1;
}

}  // namespace sponge
