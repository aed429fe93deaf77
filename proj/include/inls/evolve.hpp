#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inls/functionals.hpp"
#include "inls/grid.hpp"
#include "inls/params.hpp"

namespace inls {

enum class PhiKind { QuadraticTruncated };

// psi(r) = R^2 phi(r/R) with phi(s) = s^2 on [0,1], the quintic
// (1-t)^3 (1 + 5t + 13t^2), t = s-1, on [1,2], and 0 beyond. phi is C^2.
class VirialCutoff {
 public:
  explicit VirialCutoff(double R);
  double R() const { return R_; }
  double psi(double r) const;
  double dpsi(double r) const;
  double d2psi(double r) const;
  // chi = Laplacian of psi and its radial derivative, for dimension N
  double chi(double r, int N) const;
  double dchi(double r, int N) const;

  // phi and its derivatives in s
  static double phi(double s);
  static double dphi(double s);
  static double d2phi(double s);
  static double d3phi(double s);

 private:
  double R_;
};

struct EvolutionConfig {
  ModelParams params;
  int J;
  double h;
  double dt;
  double t_end;
  int record_every = 1;
  double virial_R;
  PhiKind phi_kind = PhiKind::QuadraticTruncated;
  bool nonlinear = true;
  double boundary_budget = 1e-8;
  // CN is unconditionally stable; this bounds dt / h^2 for accuracy only
  double dt_safety = 16.0;

  void validate() const;  // throws std::invalid_argument
};

// Strang splitting: nonlinear phase half-step, Crank-Nicolson step,
// nonlinear phase half-step. The CN factorisation is built once.
class SplitStepper {
 public:
  SplitStepper(GridPtr grid, const ModelParams& params, double dt, bool nonlinear = true);
  void advance(std::vector<cplx>& u) const;
  RadialField step(const RadialField& u) const;

 private:
  void phase(std::vector<cplx>& u, double tau) const;
  GridPtr grid_;
  ModelParams params_;
  double dt_;
  bool nonlinear_;
  LaplacianStencil st_;
  std::vector<double> rb_;
  Tridiagonal<cplx> implicit_;
};

RadialField step(const RadialField& u, double dt, const ModelParams& params);

struct VirialValues {
  double zR;
  double zR_prime;
  double zR_second_direct;
  double hessian_term;
  double bilaplacian_term;
  double laplacian_potential_term;
  double weight_gradient_term;
};

VirialValues virial_series(const RadialField& u, const ModelParams& params, double R);

// Rigorous bound on |z''_R - (8G - c P)| from exterior quantities:
// c1 G_ext + c2 M_ext / R^2 + c3 P_ext.
struct ExteriorBudget {
  double grad_ext;
  double mass_ext;
  double potential_ext;
  double bound;
};
ExteriorBudget exterior_budget(const RadialField& u, const ModelParams& params, double R);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  std::vector<double> grad_series;
  std::vector<double> potential_series;
  std::vector<double> gm_product_series;
  std::vector<double> zR_series;
  std::vector<double> zR_prime_series;
  std::vector<double> zR_second_direct_series;
  std::vector<double> budget_series;
  std::vector<double> boundary_fraction_series;

  double dt = 0;
  double h = 0;
  double virial_R = 0;
  int record_every = 1;
  double max_step_mass_drift = 0;  // max |M_{n+1} - M_n| / M_0 over all steps
  bool boundary_leak = false;
  // uniform gradient bound, checked when the data start below threshold
  bool gr_checked = false;
  bool gr_holds = true;
  double gr_initial_margin = 0;
  double gr_min_margin = 0;
  bool exploratory = false;  // data not known to be below threshold
};

struct RunResult {
  EvolutionTrace trace;
  RadialField final_state;
};

RunResult run(const RadialField& u0, const EvolutionConfig& config, const ThresholdReport* report = nullptr);

std::vector<std::string> trace_header();
std::vector<std::vector<std::string>> trace_rows(const EvolutionTrace& t, int precision);

enum class RigidityStatus { Holds, RTooSmall, Violated };
std::string to_string(RigidityStatus s);

struct RigidityReport {
  RigidityStatus status;
  double lower_bound;      // 8 A E[u]
  double max_budget;
  double min_margin;       // min_t z''(t) - (8AE - budget(t))
  double min_direct_gap;   // min_t z''(t) - 8AE
  double integrated_min_margin;  // min_t z'(t) - z'(0) - 8AE t + int budget
};

RigidityReport rigidity_check(const EvolutionTrace& trace, const ThresholdReport& report);

struct DiagnosticOptions {
  double decay_fraction = 0.05;
  double tail_fraction = 0.5;
  double grad_tol = 0.05;
};

struct DiagnosticReport {
  double potential_ratio;  // P(t_end) / P(0)
  bool potential_decays;
  double decay_exponent;   // least-squares slope of log P against log t on the tail
  double grad_relative_change;
  bool grad_converges;
  bool scattering_like;
};

DiagnosticReport scattering_diagnostic(const EvolutionTrace& trace, const DiagnosticOptions& opts = {});

}  // namespace inls
