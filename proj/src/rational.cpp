#include "rftap/rational.hpp"

#include <cctype>

#include "rftap/errors.hpp"

namespace rftap {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Decimal only: GMP would read a leading zero as an octal prefix.
Integer parse_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer(std::string(digits));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Integer num;
  Integer den(1);
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto p = body.substr(0, slash);
    auto q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    num = parse_integer(p);
    den = parse_integer(q);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw ParseError("malformed decimal '" + std::string(text) + "'");
    num = parse_integer(std::string(whole) + std::string(frac));
    den = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size()));
  } else {
    if (!all_digits(body))
      throw ParseError("malformed rational '" + std::string(text) + "'");
    num = parse_integer(body);
  }
  if (den == 0)
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  if (negative) num = -num;
  // The two-argument constructor canonicalizes.
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

}  // namespace rftap
