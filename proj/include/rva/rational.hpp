#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rva {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A point of Q^n. Components are always kept in lowest terms by cpp_rational.
using RationalVector = std::vector<Rational>;

/// Parses "p", "-p" or "p/q" (q > 0). Throws ParseError on malformed input.
Rational parse_rational(std::string_view text);

/// Parses a comma separated list of rationals, e.g. "1/2,-3,0".
RationalVector parse_rational_vector(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const RationalVector& v);

Integer floor_of(const Rational& q);

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

Integer lcm_of(const Integer& a, const Integer& b);

}  // namespace rva
