#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace rftap {

// Exact rational backed by GMP's mpq. Always canonical: lowest terms with a
// positive denominator. Expression templates are off so `auto` is safe.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

// Accepts "p/q", "p" (integer) or a finite decimal such as "-0.25".
// Throws ParseError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

// Always "p/q", even for integers ("2/1"), so the output is unambiguous.
std::string to_string(const Rational& value);

inline int sign(const Rational& value) { return value.sign(); }

}  // namespace rftap
