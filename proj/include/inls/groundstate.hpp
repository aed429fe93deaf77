#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "inls/grid.hpp"
#include "inls/params.hpp"

namespace inls {

enum class SolveMethod { Shooting, FixedPoint };
std::string to_string(SolveMethod m);

struct GroundState {
  ModelParams params;
  RadialField profile;
  double mass2;
  double grad2;
  double potential;
  double energy;
  double cgn;       // Weinstein quotient at the profile
  SolveMethod method;
  double residual;  // see solve_shooting / solve_fixedpoint
  double amplitude; // Q at the first node (shooting: Q(0))
  int iterations;
};

class NoBracket : public std::runtime_error {
 public:
  NoBracket(double lo, double hi)
      : std::runtime_error("shooting: no bracket in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lo(lo), hi(hi) {}
  double lo, hi;
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<double> trace;  // successive-iterate distances
};

struct ShootingOptions {
  // Explicit bracket for Q(0); searched automatically when empty.
  std::optional<std::pair<double, double>> bracket;
  double ode_rel_tol = 1e-14;
  double ode_abs_tol = 1e-17;
  // Preferred tail-matching level for Q/Q(0). Rarely reachable in double
  // precision; the match then happens at the last node where the two
  // bracketing trajectories still agree.
  double tail_threshold = 1e-10;
  double agreement_tol = 1e-6;
  int max_bisections = 200;
  bool allow_out_of_scope = false;
};

struct FixedPointOptions {
  double tol = 1e-11;
  int max_iter = 2000;
  // Stabilising exponent on M_n; (alpha+1)/alpha when empty.
  std::optional<double> exponent;
  double seed_amplitude = 1.0;
  double seed_width = 1.0;
  bool allow_out_of_scope = false;
};

// Radial ODE shooting on Q(0). The reported residual is the equation
// residual from sixth-order central differences at nodes with r >= 1;
// near the origin Q ~ a - c r^{2-b} is not resolved by any fixed stencil.
GroundState solve_shooting(const ModelParams& params, GridPtr grid, const ShootingOptions& opts = {});

// Normalised fixed-point iteration on the grid operator. The residual is
// the weighted l2 norm of -Q + Delta_h Q + r^{-b} Q^{alpha+1}.
GroundState solve_fixedpoint(const ModelParams& params, GridPtr grid, const FixedPointOptions& opts = {});

// Equation residual -Q + Q'' + (N-1)Q'/r + r^{-b}|Q|^alpha Q with sixth-order
// central differences, weighted l2 over nodes in [r_from, r_max - 3h].
double smooth_region_residual(const RadialField& q, const ModelParams& params, double r_from);

struct IdentityRow {
  std::string name;
  double lhs;
  double rhs;
  double rel_residual;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  double max_residual() const;
};

IdentityReport verify_identities(const GroundState& gs);

double weinstein_quotient(const RadialField& u, const ModelParams& params);

struct SharpConstant {
  double cgn_formula;
  double cgn_direct;
  double rel_gap;
};
SharpConstant sharp_constant(const GroundState& gs);

struct ProbeReport {
  int trials;
  double max_quotient;
  double cgn_direct;
  double tol;
  bool holds;
};
ProbeReport gn_maximality_probe(const GroundState& gs, int trials, std::uint64_t seed = 0, double tol = 1e-3);

}  // namespace inls
