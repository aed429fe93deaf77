#include "inls/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "inls/csv.hpp"

namespace inls {

VirialCutoff::VirialCutoff(double R) : R_(R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("virial cutoff: R must be > 0");
}

// On [1,2] with t = s - 1: phi = 1 + 2t + t^2 - 25t^3 + 34t^4 - 13t^5.
double VirialCutoff::phi(double s) {
  if (s <= 1.0) return s * s;
  if (s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return 1.0 + t * (2.0 + t * (1.0 + t * (-25.0 + t * (34.0 - 13.0 * t))));
}

double VirialCutoff::dphi(double s) {
  if (s <= 1.0) return 2.0 * s;
  if (s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return 2.0 + t * (2.0 + t * (-75.0 + t * (136.0 - 65.0 * t)));
}

double VirialCutoff::d2phi(double s) {
  if (s <= 1.0) return 2.0;
  if (s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return 2.0 + t * (-150.0 + t * (408.0 - 260.0 * t));
}

double VirialCutoff::d3phi(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return -150.0 + t * (816.0 - 780.0 * t);
}

double VirialCutoff::psi(double r) const { return R_ * R_ * phi(r / R_); }
double VirialCutoff::dpsi(double r) const { return R_ * dphi(r / R_); }
double VirialCutoff::d2psi(double r) const { return d2phi(r / R_); }

double VirialCutoff::chi(double r, int N) const {
  const double s = r / R_;
  if (s <= 1.0) return 2.0 * N;
  return d2phi(s) + (N - 1) * dphi(s) / s;
}

double VirialCutoff::dchi(double r, int N) const {
  const double s = r / R_;
  if (s <= 1.0 || s >= 2.0) return 0.0;
  return (d3phi(s) + (N - 1) * (d2phi(s) / s - dphi(s) / (s * s))) / R_;
}

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("evolve: t_end must be > 0");
  if (record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
  if (J < 4) throw std::invalid_argument("evolve: J must be >= 4");
  if (!(h > 0.0)) throw std::invalid_argument("evolve: h must be > 0");
  if (!(virial_R > 0.0) || !(virial_R < J * h / 2.0))
    throw std::invalid_argument("evolve: virial_R must lie in (0, r_max/2)");
  if (!(params.b < params.N)) throw std::invalid_argument("evolve: b must be < N");
  if (!(dt_safety > 0.0) || !(dt <= dt_safety * h * h))
    throw std::invalid_argument("evolve: dt must be <= dt_safety * h^2 (dt_safety = " + std::to_string(dt_safety) +
                                ")");
}

SplitStepper::SplitStepper(GridPtr grid, const ModelParams& params, double dt, bool nonlinear)
    : grid_(std::move(grid)), params_(params), dt_(dt), nonlinear_(nonlinear), st_(laplacian_stencil(*grid_)),
      rb_(grid_->J()), implicit_([&] {
        const int J = grid_->J();
        const cplx it(0.0, 0.5 * dt);
        std::vector<cplx> lo(J), di(J), up(J);
        for (int j = 0; j < J; ++j) {
          lo[j] = -it * st_.lower[j];
          di[j] = 1.0 - it * st_.diag[j];
          up[j] = -it * st_.upper[j];
        }
        return Tridiagonal<cplx>(lo, di, up);
      }()) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
  for (int j = 0; j < grid_->J(); ++j) rb_[j] = std::pow(grid_->node(j), -params_.b);
}

void SplitStepper::phase(std::vector<cplx>& u, double tau) const {
  const double a = params_.alpha;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double m = std::abs(u[j]);
    if (m == 0.0) continue;
    const double theta = tau * rb_[j] * std::pow(m, a);
    u[j] *= cplx(std::cos(theta), std::sin(theta));
  }
}

void SplitStepper::advance(std::vector<cplx>& u) const {
  const int J = static_cast<int>(u.size());
  if (nonlinear_) phase(u, 0.5 * dt_);
  const cplx it(0.0, 0.5 * dt_);
  std::vector<cplx> rhs(J);
  for (int j = 0; j < J; ++j) {
    cplx lap = st_.diag[j] * u[j];
    if (j > 0) lap += st_.lower[j] * u[j - 1];
    if (j + 1 < J) lap += st_.upper[j] * u[j + 1];
    rhs[j] = u[j] + it * lap;
  }
  implicit_.solve_in_place(rhs);
  u.swap(rhs);
  if (nonlinear_) phase(u, 0.5 * dt_);
}

RadialField SplitStepper::step(const RadialField& u) const {
  if (!(u.grid() == *grid_)) throw std::invalid_argument("step: field grid differs from stepper grid");
  std::vector<cplx> v(u.values());
  advance(v);
  return RadialField(u.grid_ptr(), std::move(v));
}

RadialField step(const RadialField& u, double dt, const ModelParams& params) {
  return SplitStepper(u.grid_ptr(), params, dt).step(u);
}

VirialValues virial_series(const RadialField& u, const ModelParams& p, double R) {
  const VirialCutoff cut(R);
  const auto& g = u.grid();
  const int J = u.size(), N = g.N();
  const double h = g.h(), a = p.alpha, b = p.b;
  const auto& w = g.weights();
  const auto& fw = g.face_weights();
  VirialValues v{};
  for (int j = 0; j < J; ++j) {
    const double r = g.node(j);
    const double m2 = std::norm(u[j]);
    v.zR += w[j] * cut.psi(r) * m2;
    if (m2 > 0.0) {
      const double pot = std::pow(r, -b) * std::pow(m2, 0.5 * (a + 2.0));
      v.laplacian_potential_term -= 2.0 * a / (a + 2.0) * w[j] * cut.chi(r, N) * pot;
      v.weight_gradient_term -= 4.0 * b / (a + 2.0) * w[j] * cut.dpsi(r) / r * pot;
    }
  }
  for (int f = 0; f < J; ++f) {
    const cplx un = f + 1 < J ? u[f + 1] : cplx(0.0);
    const cplx du = (un - u[f]) / h;
    const double rf = g.face(f);
    const double dpsi = (cut.psi(g.node(f + 1)) - cut.psi(g.node(f))) / h;
    v.zR_prime += 2.0 * fw[f] * std::imag(du * dpsi * std::conj(0.5 * (un + u[f])));
    v.hessian_term += 4.0 * fw[f] * cut.d2psi(rf) * std::norm(du);
    // chi' jumps at R and 2R; its cell average keeps the sum second order
    const double dchi = (cut.chi(g.node(f + 1), N) - cut.chi(g.node(f), N)) / h;
    v.bilaplacian_term += fw[f] * dchi * (std::norm(un) - std::norm(u[f])) / h;
  }
  v.zR_second_direct = v.hessian_term + v.bilaplacian_term + v.laplacian_potential_term + v.weight_gradient_term;
  return v;
}

namespace {

struct BudgetConstants {
  double s2, s3, s4, k;
};

// Suprema over s >= 1 of the cutoff's deviations from the quadratic profile.
BudgetConstants budget_constants(int N) {
  BudgetConstants c{2.0, 2.0 * N, 2.0, 0.0};
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double s = 1.0 + double(i) / n;
    const double p1 = VirialCutoff::dphi(s), p2 = VirialCutoff::d2phi(s), p3 = VirialCutoff::d3phi(s);
    c.s2 = std::max(c.s2, std::abs(p2 - 2.0));
    c.s3 = std::max(c.s3, std::abs(p2 - 2.0 + (N - 1) * (p1 / s - 2.0)));
    c.s4 = std::max(c.s4, std::abs(p1 / s - 2.0));
    c.k = std::max(c.k, std::abs(p3 + (N - 1) * (p2 / s - p1 / (s * s))));
  }
  const double safety = 1.001;  // sampling of smooth functions on [1,2]
  return {c.s2 * safety, c.s3 * safety, c.s4 * safety, c.k * safety};
}

}  // namespace

ExteriorBudget exterior_budget(const RadialField& u, const ModelParams& p, double R) {
  const auto& g = u.grid();
  const int J = u.size();
  const double h = g.h(), a = p.alpha, b = p.b;
  const auto c = budget_constants(g.N());
  ExteriorBudget e{};
  for (int f = 0; f < J; ++f) {
    if (g.face(f) <= R) continue;
    const cplx un = f + 1 < J ? u[f + 1] : cplx(0.0);
    e.grad_ext += g.face_weights()[f] * std::norm((un - u[f]) / h);
    e.mass_ext += 0.5 * g.face_weights()[f] * (std::norm(u[f]) + std::norm(un));
  }
  for (int j = 0; j < J; ++j) {
    const double r = g.node(j);
    if (r <= R) continue;
    e.potential_ext += g.weights()[j] * std::pow(r, -b) * std::pow(std::abs(u[j]), a + 2.0);
  }
  e.bound = (4.0 * c.s2 + 0.5 * c.k) * e.grad_ext + 2.0 * c.k * e.mass_ext / (R * R) +
            (2.0 * a / (a + 2.0) * c.s3 + 4.0 * b / (a + 2.0) * c.s4) * e.potential_ext;
  return e;
}

namespace {

void record(EvolutionTrace& tr, double t, const RadialField& u, const ModelParams& p, double R) {
  const double m = mass(u);
  const double gn = grad_norm(u);
  const double g2 = gn * gn;
  const double pot = potential_term(u, p.alpha, p.b);
  const auto v = virial_series(u, p, R);
  tr.times.push_back(t);
  tr.mass_series.push_back(m);
  tr.grad_series.push_back(g2);
  tr.potential_series.push_back(pot);
  tr.energy_series.push_back(0.5 * g2 - pot / (p.alpha + 2.0));
  tr.gm_product_series.push_back(gm_product(g2, m, p.s_c));
  tr.zR_series.push_back(v.zR);
  tr.zR_prime_series.push_back(v.zR_prime);
  tr.zR_second_direct_series.push_back(v.zR_second_direct);
  tr.budget_series.push_back(exterior_budget(u, p, R).bound);
  tr.boundary_fraction_series.push_back(boundary_mass_fraction(u));
}

}  // namespace

RunResult run(const RadialField& u0, const EvolutionConfig& cfg, const ThresholdReport* report) {
  cfg.validate();
  const auto& g = u0.grid();
  if (g.J() != cfg.J || g.h() != cfg.h || g.N() != cfg.params.N)
    throw std::invalid_argument("evolve: initial field grid does not match config");
  const SplitStepper stepper(u0.grid_ptr(), cfg.params, cfg.dt, cfg.nonlinear);
  const long long nsteps = std::max(1LL, std::llround(cfg.t_end / cfg.dt));

  EvolutionTrace tr;
  tr.dt = cfg.dt;
  tr.h = cfg.h;
  tr.virial_R = cfg.virial_R;
  tr.record_every = cfg.record_every;

  std::vector<cplx> u(u0.values());
  record(tr, 0.0, u0, cfg.params, cfg.virial_R);
  const auto& w = g.weights();
  auto discrete_mass = [&] {
    double s = 0.0;
    for (int j = 0; j < g.J(); ++j) s += w[j] * std::norm(u[j]);
    return s;
  };
  const double m0 = discrete_mass();
  double m_prev = m0;
  for (long long n = 1; n <= nsteps; ++n) {
    stepper.advance(u);
    const double m = discrete_mass();
    if (m0 > 0.0) tr.max_step_mass_drift = std::max(tr.max_step_mass_drift, std::abs(m - m_prev) / m0);
    m_prev = m;
    if (n % cfg.record_every == 0 || n == nsteps)
      record(tr, n * cfg.dt, RadialField(u0.grid_ptr(), u), cfg.params, cfg.virial_R);
  }

  for (double f : tr.boundary_fraction_series)
    if (f > cfg.boundary_budget) tr.boundary_leak = true;

  const bool below = report && (report->verdict == Verdict::GlobalScatters || report->verdict == Verdict::GlobalOnly);
  tr.exploratory = !below;
  if (below) {
    tr.gr_checked = true;
    tr.gr_initial_margin = report->gm_threshold - tr.gm_product_series.front();
    tr.gr_min_margin = tr.gr_initial_margin;
    for (double gm : tr.gm_product_series) {
      const double margin = report->gm_threshold - gm;
      tr.gr_min_margin = std::min(tr.gr_min_margin, margin);
      if (!(margin > 0.0)) tr.gr_holds = false;
    }
  }
  return {std::move(tr), RadialField(u0.grid_ptr(), std::move(u))};
}

std::vector<std::string> trace_header() {
  return {"t", "mass", "energy", "grad2", "potential", "gm_product", "zR", "zR_prime", "zR_second"};
}

std::vector<std::vector<std::string>> trace_rows(const EvolutionTrace& t, int precision) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    rows.push_back({format_real(t.times[i], precision), format_real(t.mass_series[i], precision),
                    format_real(t.energy_series[i], precision), format_real(t.grad_series[i], precision),
                    format_real(t.potential_series[i], precision), format_real(t.gm_product_series[i], precision),
                    format_real(t.zR_series[i], precision), format_real(t.zR_prime_series[i], precision),
                    format_real(t.zR_second_direct_series[i], precision)});
  }
  return rows;
}

std::string to_string(RigidityStatus s) {
  switch (s) {
    case RigidityStatus::Holds: return "Holds";
    case RigidityStatus::RTooSmall: return "R_too_small";
    case RigidityStatus::Violated: return "Violated";
  }
  return "?";
}

RigidityReport rigidity_check(const EvolutionTrace& tr, const ThresholdReport& rep) {
  if (rep.verdict != Verdict::GlobalScatters && rep.verdict != Verdict::GlobalOnly)
    throw std::invalid_argument("rigidity_check: data are not below threshold");
  if (!rep.A) throw std::invalid_argument("rigidity_check: A undefined");
  if (tr.times.empty()) throw std::invalid_argument("rigidity_check: empty trace");
  const double lower = 8.0 * (*rep.A) * rep.energy;
  RigidityReport r{RigidityStatus::Holds, lower, 0.0, INFINITY, INFINITY, INFINITY};
  bool violated = false, too_small = false;
  double budget_integral = 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double z2 = tr.zR_second_direct_series[i];
    const double bud = tr.budget_series[i];
    r.max_budget = std::max(r.max_budget, bud);
    const double margin = z2 - (lower - bud);
    r.min_margin = std::min(r.min_margin, margin);
    r.min_direct_gap = std::min(r.min_direct_gap, z2 - lower);
    if (margin < 0.0) violated = true;
    if (bud > lower) too_small = true;
    if (i > 0) {
      const double dt = tr.times[i] - tr.times[i - 1];
      budget_integral += 0.5 * dt * (bud + tr.budget_series[i - 1]);
      const double integrated = tr.zR_prime_series[i] - tr.zR_prime_series[0] - lower * tr.times[i] + budget_integral;
      r.integrated_min_margin = std::min(r.integrated_min_margin, integrated);
    }
  }
  r.status = violated ? RigidityStatus::Violated : too_small ? RigidityStatus::RTooSmall : RigidityStatus::Holds;
  return r;
}

DiagnosticReport scattering_diagnostic(const EvolutionTrace& tr, const DiagnosticOptions& o) {
  if (tr.times.size() < 3) throw std::invalid_argument("scattering_diagnostic: need at least 3 records");
  DiagnosticReport d{};
  const double p0 = tr.potential_series.front();
  d.potential_ratio = p0 > 0.0 ? tr.potential_series.back() / p0 : 0.0;
  d.potential_decays = d.potential_ratio < o.decay_fraction;

  const double t_end = tr.times.back();
  const double t_tail = (1.0 - o.tail_fraction) * t_end;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  std::size_t first_tail = tr.times.size() - 1;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (tr.times[i] < t_tail || tr.times[i] <= 0.0 || !(tr.potential_series[i] > 0.0)) continue;
    first_tail = std::min(first_tail, i);
    const double x = std::log(tr.times[i]), y = std::log(tr.potential_series[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  d.decay_exponent = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  const double g_end = tr.grad_series.back();
  const double g_mid = tr.grad_series[first_tail];
  d.grad_relative_change = g_end > 0.0 ? std::abs(g_end - g_mid) / g_end : 0.0;
  d.grad_converges = d.grad_relative_change < o.grad_tol;
  d.scattering_like = d.potential_decays && d.grad_converges;
  return d;
}

}  // namespace inls
