#include "rva/rational.hpp"

#include <cctype>

#include "rva/errors.hpp"

namespace rva {

namespace {

Integer parse_integer(std::string_view text, std::size_t offset) {
  if (text.empty()) throw ParseError("expected an integer", 0, offset + 1);
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw ParseError("expected digits", 0, offset + i + 1);
  Integer value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw ParseError(std::string("unexpected character '") + text[i] + "' in number", 0, offset + i + 1);
    value = value * 10 + (text[i] - '0');
  }
  return negative ? Integer(-value) : value;
}

std::string_view trim(std::string_view s, std::size_t& offset) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
    ++offset;
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Rational parse_rational_at(std::string_view text, std::size_t offset) {
  text = trim(text, offset);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, offset));
  Integer num = parse_integer(text.substr(0, slash), offset);
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+'))
    throw ParseError("denominator must be a positive integer", 0, offset + slash + 2);
  Integer den = parse_integer(den_text, offset + slash + 1);
  if (den == 0) throw ParseError("zero denominator", 0, offset + slash + 2);
  return Rational(num, den);
}

}  // namespace

Rational parse_rational(std::string_view text) { return parse_rational_at(text, 0); }

RationalVector parse_rational_vector(std::string_view text) {
  RationalVector out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_rational_at(piece, start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string to_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

std::string to_string(const RationalVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += to_string(v[i]);
  }
  return out;
}

Integer floor_of(const Rational& q) {
  Integer n = numerator_of(q), d = denominator_of(q);
  Integer f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

Integer lcm_of(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  Integer g = boost::multiprecision::gcd(a, b);
  Integer l = a / g * b;
  return l < 0 ? Integer(-l) : l;
}

}  // namespace rva
