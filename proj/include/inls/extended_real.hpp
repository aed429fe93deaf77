#pragma once

#include <compare>
#include <string>

namespace inls {

// A real number or +infinity. Finite values are always finite doubles,
// so the ordering is total.
class ExtendedReal {
 public:
  ExtendedReal(double v);  // throws std::invalid_argument on NaN/inf

  static ExtendedReal infinity() { return ExtendedReal(); }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  double value() const;  // throws std::logic_error when infinite

  std::string to_string() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b);

 private:
  ExtendedReal() : v_(0.0), inf_(true) {}
  double v_;
  bool inf_;
};

}  // namespace inls
