#include "inls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "inls/csv.hpp"
#include "inls/evolve.hpp"

namespace inls {

double mass(const RadialField& u) {
  const double n = l2_norm(u);
  return n * n;
}

double energy(const RadialField& u, const ModelParams& p) {
  const double g = grad_norm(u);
  return 0.5 * g * g - potential_term(u, p.alpha, p.b) / (p.alpha + 2.0);
}

double em_product(double e, double m, double s_c) {
  const double mag = std::pow(std::abs(e), s_c) * std::pow(m, 1.0 - s_c);
  return e < 0.0 ? -mag : mag;
}

double gm_product(double grad2, double m, double s_c) {
  return std::pow(grad2, 0.5 * s_c) * std::pow(m, 0.5 * (1.0 - s_c));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GlobalScatters: return "GlobalScatters";
    case Verdict::GlobalOnly: return "GlobalOnly";
    case Verdict::AtThreshold: return "AtThreshold";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

struct Products {
  double mass, energy, em, gm;
};

Products products(const RadialField& u, const ModelParams& p) {
  const double m = mass(u);
  const double g = grad_norm(u);
  const double e = 0.5 * g * g - potential_term(u, p.alpha, p.b) / (p.alpha + 2.0);
  return {m, e, em_product(e, m, p.s_c), gm_product(g * g, m, p.s_c)};
}

// Same function on the grid of spacing 2h: node pairs averaged.
RadialField coarsen(const RadialField& u) {
  const auto& g = u.grid();
  const int Jc = g.J() / 2;
  if (Jc < 4) throw std::invalid_argument("classify: grid too small for error estimate");
  std::vector<cplx> v(Jc);
  for (int k = 0; k < Jc; ++k) v[k] = 0.5 * (u[2 * k] + u[2 * k + 1]);
  return RadialField(RadialGrid::create(g.N(), Jc, 2.0 * g.h()), std::move(v));
}

// Richardson estimate |I_h - I_2h| / 3 for a second-order quadrature.
struct ProductErrors {
  double em, gm;
};

ProductErrors product_errors(const RadialField& u, const ModelParams& p, const Products& fine) {
  const auto coarse = products(coarsen(u), p);
  const double eps = std::numeric_limits<double>::epsilon();
  return {std::max(std::abs(fine.em - coarse.em) / 3.0, 64 * eps * std::abs(fine.em)),
          std::max(std::abs(fine.gm - coarse.gm) / 3.0, 64 * eps * std::abs(fine.gm))};
}

}  // namespace

ThresholdReport classify(const RadialField& u0, const GroundState& gs) {
  const auto& p = gs.params;
  if (u0.grid().N() != p.N) throw std::invalid_argument("classify: field dimension differs from ground state");
  const auto fine = products(u0, p);
  const auto err = product_errors(u0, p, fine);
  const auto q = products(gs.profile, p);
  const auto qerr = product_errors(gs.profile, p, q);

  ThresholdReport r{};
  r.mass = fine.mass;
  r.energy = fine.energy;
  r.em_product = fine.em;
  r.gm_product = fine.gm;
  r.em_threshold = em_product(gs.energy, gs.mass2, p.s_c);
  r.gm_threshold = gm_product(gs.grad2, gs.mass2, p.s_c);
  r.em_error = err.em + qerr.em;
  r.gm_error = err.gm + qerr.gm;
  r.w = r.em_threshold > 0.0 ? r.em_product / r.em_threshold : std::numeric_limits<double>::quiet_NaN();
  if (r.w >= 0.0) r.A = 1.0 - std::pow(r.w, 0.5 * p.alpha);

  const auto scope = validate_scope(p);
  const bool at = std::abs(r.em_product - r.em_threshold) <= 3.0 * r.em_error ||
                  std::abs(r.gm_product - r.gm_threshold) <= 3.0 * r.gm_error;
  const bool below = r.em_product < r.em_threshold && r.gm_product < r.gm_threshold;
  if (at)
    r.verdict = Verdict::AtThreshold;
  else if (below && scope.theorem_scope)
    r.verdict = Verdict::GlobalScatters;
  else if (below && scope.global_scope)
    r.verdict = Verdict::GlobalOnly;
  else
    r.verdict = Verdict::Unknown;
  return r;
}

std::vector<std::string> threshold_header() {
  return {"mass", "energy", "em_product", "gm_product", "em_threshold", "gm_threshold", "w", "A", "verdict"};
}

std::vector<std::string> threshold_row(const ThresholdReport& r, int precision) {
  auto f = [&](double v) { return std::isfinite(v) ? format_real(v, precision) : std::string("nan"); };
  return {f(r.mass), f(r.energy), f(r.em_product), f(r.gm_product), f(r.em_threshold), f(r.gm_threshold),
          f(r.w), r.A ? f(*r.A) : std::string(""), to_string(r.verdict)};
}

bool LgsReport::holds() const {
  return !hypotheses_failed && slack_i >= 0.0 && slack_ii >= 0.0 && slack_iii_left >= 0.0 && slack_iii_right >= 0.0;
}

LgsReport lgs_verify(const RadialField& u, const GroundState& gs) {
  const auto& p = gs.params;
  if (!p.sigma) throw std::invalid_argument("lgs_verify: requires s_c > 0");
  const double sigma = *p.sigma;
  const auto pr = products(u, p);
  const double g = grad_norm(u);
  const double G = g * g;
  const double P = potential_term(u, p.alpha, p.b);
  const double em_q = em_product(gs.energy, gs.mass2, p.s_c);
  const double gm_q = gm_product(gs.grad2, gs.mass2, p.s_c);

  LgsReport r{};
  r.hypotheses_failed = !(pr.em < em_q && pr.gm <= gm_q && pr.energy >= 0.0);
  if (r.hypotheses_failed) return r;
  const double w = pr.em / em_q;
  const double A = 1.0 - std::pow(w, 0.5 * p.alpha);
  const double k = p.alpha * p.s_c / (p.N * p.alpha + 2.0 * p.b);
  const double c = 4.0 * (p.N * p.alpha + 2.0 * p.b) / (p.alpha + 2.0);

  r.slack_i = std::min(pr.energy - k * G, 0.5 * G - pr.energy);
  r.slack_ii = w * gs.grad2 * std::pow(gs.mass2, sigma) - G * std::pow(pr.mass, sigma);
  r.slack_iii_left = 8.0 * A * G - 16.0 * A * pr.energy;
  r.slack_iii_right = 8.0 * G - c * P - 8.0 * A * G;
  r.logged_sqrt_w_form = std::sqrt(w) * gm_q - pr.gm;
  r.logged_wsc_form = std::pow(w, 0.5 * p.s_c) * gm_q - pr.gm;
  return r;
}

cplx free_gaussian(int N, double r, double t) {
  const cplx d(1.0, 4.0 * t);
  return std::pow(d, -0.5 * N) * std::exp(-r * r / d);
}

DecayReport linear_decay_check(const ModelParams& params, double p, const std::vector<double>& t_list,
                               const DecayOptions& opts) {
  const int N = params.N;
  if (!(p > 2.0)) throw std::invalid_argument("linear_decay_check: p must be > 2");
  if (N >= 3 && !(p < 2.0 * N / (N - 2.0)))
    throw std::invalid_argument("linear_decay_check: p must be < 2N/(N-2)");
  if (!std::isfinite(p)) throw std::invalid_argument("linear_decay_check: p must be finite");
  for (std::size_t i = 0; i < t_list.size(); ++i)
    if (!(t_list[i] > 0.0) || (i > 0 && !(t_list[i] > t_list[i - 1])))
      throw std::invalid_argument("linear_decay_check: t_list must be increasing and positive");

  const auto grid = RadialGrid::covering(N, opts.r_max, opts.h);
  const auto u0 = RadialField::sample(grid, [](double r) { return std::exp(-r * r); });
  const SplitStepper stepper(grid, params, opts.dt, false);
  const auto& w = grid->weights();
  const double a = params.alpha, b = params.b;

  auto weighted_product = [&](const std::vector<cplx>& u) {
    double s = 0.0;
    for (int j = 0; j < grid->J(); ++j) {
      const double r = grid->node(j);
      s += w[j] * std::pow(r, -b) * std::pow(std::abs(u[j]), a + 1.0) * std::exp(-r * r);
    }
    return s;
  };
  auto discrete_mass = [&](const std::vector<cplx>& u) {
    double s = 0.0;
    for (int j = 0; j < grid->J(); ++j) s += w[j] * std::norm(u[j]);
    return s;
  };

  DecayReport rep{};
  rep.p = p;
  std::vector<cplx> u(u0.values());
  rep.weighted_product_initial = weighted_product(u);
  const double m0 = discrete_mass(u);
  double m_prev = m0;
  long long n = 0;
  for (double t : t_list) {
    const long long target = std::llround(t / opts.dt);
    for (; n < target; ++n) {
      stepper.advance(u);
      const double m = discrete_mass(u);
      rep.max_step_mass_drift = std::max(rep.max_step_mass_drift, std::abs(m - m_prev) / m0);
      m_prev = m;
    }
    const RadialField f(grid, u);
    DecaySample s{};
    s.t = t;
    s.lp_numeric = lp_norm(f, p);
    s.lp_exact = std::pow(1.0 + 16.0 * t * t, -0.25 * N + 0.5 * N / p) * std::pow(M_PI / p, 0.5 * N / p);
    s.lp_scaled = s.lp_numeric * std::pow(t, N * (0.5 - 1.0 / p));
    for (const auto& v : u) s.sup_numeric = std::max(s.sup_numeric, std::abs(v));
    s.sup_exact = std::pow(1.0 + 16.0 * t * t, -0.25 * N);
    s.weighted_product = weighted_product(u);
    s.mass_drift = std::abs(discrete_mass(u) - m0) / m0;
    rep.samples.push_back(s);
  }
  return rep;
}

}  // namespace inls
