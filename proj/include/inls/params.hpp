#pragma once

#include <optional>

#include "inls/extended_real.hpp"

namespace inls {

double critical_index(int N, double alpha, double b);

struct ModelParams {
  int N;
  double alpha;
  double b;
  double s_c;
  std::optional<double> sigma;  // (1 - s_c)/s_c, only when s_c > 0

  // Validates N >= 1, alpha > 0, b >= 0, all finite.
  static ModelParams make(int N, double alpha, double b);
};

struct UpperExponents {
  ExtendedReal two_star;
  ExtendedReal two_lower_star;
};

UpperExponents upper_exponents(int N, double b);

struct ScopeReport {
  bool mass_supercritical = false;   // alpha > (4-2b)/N
  bool energy_subcritical = false;   // alpha < 2^*
  bool below_two_lower_star = false; // alpha < 2_*
  bool b_theorem_ok = false;         // 0 < b < min(N/3, 1)
  bool b_global_ok = false;          // 0 < b < min(2, N)
  bool sc_in_unit = false;           // 0 < s_c < 1
  bool theorem_scope = false;
  bool global_scope = false;
};

ScopeReport validate_scope(const ModelParams& p);

struct ScalingReport {
  double l2;
  double grad_l2;
  double potential;
};

// Multipliers for u_delta(x) = delta^{(2-b)/alpha} u(delta x).
ScalingReport scaling_exponents(const ModelParams& p, double delta);

}  // namespace inls
