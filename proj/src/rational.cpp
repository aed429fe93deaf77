#include "inls/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace inls {

namespace {

boost::multiprecision::cpp_int pow10(unsigned n) {
  boost::multiprecision::cpp_int p = 1;
  for (unsigned i = 0; i < n; ++i) p *= 10;
  return p;
}

Rational parse_decimal(std::string_view s) {
  const std::string_view orig = s;
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  boost::multiprecision::cpp_int mant = 0;
  long long exp10 = 0;
  bool any_digit = false, seen_dot = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mant = mant * 10 + (c - '0');
      any_digit = true;
      if (seen_dot) --exp10;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("not a number: '" + std::string(orig) + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("not a number: '" + std::string(orig) + "'");
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    if (i == s.size()) throw std::invalid_argument("not a number: '" + std::string(orig) + "'");
    long long e = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])) || e > 100000)
        throw std::invalid_argument("not a number: '" + std::string(orig) + "'");
      e = e * 10 + (s[i] - '0');
    }
    exp10 += eneg ? -e : e;
  }
  Rational q(mant);
  if (exp10 > 0) q *= Rational(pow10(unsigned(exp10)));
  if (exp10 < 0) q /= Rational(pow10(unsigned(-exp10)));
  return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

std::string to_string(const Rational& q) { return q.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

const Rational& ExtendedRational::value() const {
  if (inf_) throw std::logic_error("ExtendedRational: value() of +inf");
  return q_;
}

ExtendedRational ExtendedRational::reciprocal() const {
  if (inf_) return ExtendedRational(0);
  if (q_ < 0) throw std::domain_error("reciprocal of a negative exponent");
  if (q_ == 0) return infinity();
  return ExtendedRational(Rational(1) / q_);
}

std::string ExtendedRational::to_string() const { return inf_ ? "inf" : q_.str(); }

double ExtendedRational::to_double() const {
  return inf_ ? std::numeric_limits<double>::infinity() : q_.convert_to<double>();
}

std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b) {
  if (a.inf_ || b.inf_) return a.inf_ <=> b.inf_;
  if (a.q_ < b.q_) return std::strong_ordering::less;
  if (a.q_ > b.q_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace inls
