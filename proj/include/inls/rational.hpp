#pragma once

#include <compare>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace inls {

// Expression templates off: results convert implicitly to ExtendedRational.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

// Parses "3", "-0.25", "1.5e-3" or "7/20" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

// Exact rational or +infinity.
class ExtendedRational {
 public:
  ExtendedRational() : q_(0), inf_(false) {}
  ExtendedRational(const Rational& q) : q_(q), inf_(false) {}
  ExtendedRational(long long n) : q_(n), inf_(false) {}

  static ExtendedRational infinity() {
    ExtendedRational e;
    e.inf_ = true;
    return e;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  const Rational& value() const;  // throws std::logic_error when infinite

  // 1/x with 1/0 = inf and 1/inf = 0. Negative values are rejected.
  ExtendedRational reciprocal() const;

  std::string to_string() const;
  double to_double() const;

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.q_ == b.q_);
  }
  friend std::strong_ordering operator<=>(const ExtendedRational& a, const ExtendedRational& b);

 private:
  Rational q_;
  bool inf_;
};

}  // namespace inls
