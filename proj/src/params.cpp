#include "inls/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "inls/csv.hpp"

namespace inls {

ExtendedReal::ExtendedReal(double v) : v_(v), inf_(false) {
  if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal: use infinity() for non-finite values");
}

double ExtendedReal::value() const {
  if (inf_) throw std::logic_error("ExtendedReal: value() of +inf");
  return v_;
}

std::string ExtendedReal::to_string() const { return inf_ ? "inf" : format_real(v_, 12); }

std::strong_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.inf_ || b.inf_) return a.inf_ <=> b.inf_;
  if (a.v_ < b.v_) return std::strong_ordering::less;
  if (a.v_ > b.v_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double critical_index(int N, double alpha, double b) {
  if (!(alpha > 0.0)) throw std::invalid_argument("critical_index: alpha must be > 0");
  return N / 2.0 - (2.0 - b) / alpha;
}

ModelParams ModelParams::make(int N, double alpha, double b) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!std::isfinite(b) || b < 0.0) throw std::invalid_argument("b must be >= 0");
  ModelParams p{N, alpha, b, critical_index(N, alpha, b), std::nullopt};
  if (p.s_c > 0.0) p.sigma = (1.0 - p.s_c) / p.s_c;
  return p;
}

UpperExponents upper_exponents(int N, double b) {
  if (N < 2) throw std::invalid_argument("upper_exponents: N must be >= 2");
  if (b < 0.0) throw std::invalid_argument("upper_exponents: b must be >= 0");
  if (N == 2) return {ExtendedReal::infinity(), ExtendedReal::infinity()};
  const double two_star = (4.0 - 2.0 * b) / (N - 2);
  if (N == 3) return {two_star, 3.0 - 2.0 * b};
  return {two_star, two_star};
}

ScopeReport validate_scope(const ModelParams& p) {
  ScopeReport s;
  const int N = p.N;
  const double a = p.alpha, b = p.b;
  s.mass_supercritical = a > (4.0 - 2.0 * b) / N;
  s.b_theorem_ok = b > 0.0 && b < std::min(N / 3.0, 1.0);
  s.b_global_ok = b > 0.0 && b < std::min(2.0, double(N));
  s.sc_in_unit = p.s_c > 0.0 && p.s_c < 1.0;
  if (N >= 2) {
    const auto up = upper_exponents(N, b);
    s.energy_subcritical = ExtendedReal(a) < up.two_star;
    s.below_two_lower_star = ExtendedReal(a) < up.two_lower_star;
  } else {
    // 2^* and 2_* are only defined for N >= 2.
    s.energy_subcritical = false;
    s.below_two_lower_star = false;
  }
  s.theorem_scope = N >= 2 && s.mass_supercritical && s.below_two_lower_star && s.b_theorem_ok &&
                    s.sc_in_unit;
  s.global_scope = N >= 2 && s.mass_supercritical && s.energy_subcritical && s.b_global_ok;
  return s;
}

ScalingReport scaling_exponents(const ModelParams& p, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("scaling_exponents: delta must be > 0");
  return {std::pow(delta, -p.s_c), std::pow(delta, 1.0 - p.s_c),
          std::pow(delta, 2.0 * (1.0 - p.s_c))};
}

}  // namespace inls
