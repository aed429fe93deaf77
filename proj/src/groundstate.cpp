#include "inls/groundstate.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "inls/rng.hpp"

namespace inls {

std::string to_string(SolveMethod m) { return m == SolveMethod::Shooting ? "shooting" : "fixedpoint"; }

namespace {

using State = std::array<double, 2>;

void require_scope(const ModelParams& p, bool override_scope, const char* who) {
  if (override_scope) return;
  if (!validate_scope(p).global_scope)
    throw std::invalid_argument(std::string(who) + ": parameters outside global scope");
}

double nonlinearity(double q, double r, const ModelParams& p) {
  return std::pow(r, -p.b) * std::pow(std::abs(q), p.alpha) * q;
}

// Small-r expansion of the solution with Q(0) = a, Q'(0) = 0. Matching powers
// of r in Q'' + (N-1)Q'/r = Q - r^{-b}Q^{alpha+1} gives terms in r^{2-b}, r^2,
// r^{4-2b}, r^{4-b}, r^4; the first neglected term is O(r^{6-3b}).
struct Series {
  double a, b, c1, d, e1, e2, e3;
  Series(double a, const ModelParams& p) : a(a), b(p.b) {
    const double N = p.N, al = p.alpha;
    const double aa = std::pow(a, al);
    c1 = -aa * a / ((2 - b) * (N - b));
    d = a / (2 * N);
    e1 = -(al + 1) * aa * c1 / ((4 - 2 * b) * (N + 2 - 2 * b));
    e2 = (c1 - (al + 1) * aa * d) / ((4 - b) * (N + 2 - b));
    e3 = d / (4 * (N + 2));
  }
  State at(double r) const {
    const double p1 = std::pow(r, 2 - b), p3 = std::pow(r, 4 - 2 * b), p4 = std::pow(r, 4 - b);
    const double q = a + c1 * p1 + d * r * r + e1 * p3 + e2 * p4 + e3 * r * r * r * r;
    const double dq = (c1 * (2 - b) * p1 + 2 * d * r * r + e1 * (4 - 2 * b) * p3 + e2 * (4 - b) * p4 +
                       4 * e3 * r * r * r * r) / r;
    return {q, dq};
  }
};

enum class Fate { Undershoot, Overshoot, Undecided };

struct Trajectory {
  Fate fate;
  double r_event;
  std::vector<double> q;   // node samples up to the event
  std::vector<double> dq;
};

Trajectory integrate(double a, const ModelParams& p, const RadialGrid& g, double r_end, bool record,
                     const ShootingOptions& o) {
  namespace ode = boost::numeric::odeint;
  const Series s(a, p);
  const double r0 = 1e-3;
  Trajectory t{Fate::Undecided, r_end, {}, {}};
  int next = 0;
  const int J = g.J();
  if (record) {
    for (; next < J && g.node(next) < r0; ++next) {
      const State x = s.at(g.node(next));
      t.q.push_back(x[0]);
      t.dq.push_back(x[1]);
    }
  }
  const double N = p.N;
  auto rhs = [&](const State& x, State& dx, double r) {
    dx[0] = x[1];
    dx[1] = -(N - 1) / r * x[1] + x[0] - nonlinearity(x[0], r, p);
  };
  auto stepper = ode::make_dense_output(o.ode_abs_tol, o.ode_rel_tol, 0.05, ode::runge_kutta_dopri5<State>());
  stepper.initialize(s.at(r0), r0, 1e-5);
  State x;
  while (stepper.current_time() < r_end) {
    stepper.do_step(rhs);
    const State& cur = stepper.current_state();
    const bool over = cur[0] < 0.0;
    const bool under = !over && cur[1] > 0.0;
    if (record) {
      for (; next < J && g.node(next) <= stepper.current_time(); ++next) {
        stepper.calc_state(g.node(next), x);
        if (x[0] <= 0.0 || x[1] > 0.0) break;
        t.q.push_back(x[0]);
        t.dq.push_back(x[1]);
      }
    }
    if (over || under) {
      t.fate = over ? Fate::Overshoot : Fate::Undershoot;
      t.r_event = stepper.current_time();
      return t;
    }
    if (!std::isfinite(cur[0]) || !std::isfinite(cur[1])) {
      t.fate = Fate::Undershoot;
      t.r_event = stepper.current_time();
      return t;
    }
  }
  return t;
}

// r^{-nu} K_nu(r) with nu = (N-2)/2: the decaying radial solution of
// Q'' + (N-1)Q'/r - Q = 0.
double decaying_mode(double r, int N) {
  if (r > 700.0) return 0.0;
  const double nu = (N - 2) / 2.0;
  return std::pow(r, -nu) * std::cyl_bessel_k(std::abs(nu), r);
}

GroundState finish(const ModelParams& p, RadialField profile, SolveMethod m, double residual, double amplitude,
                   int iterations) {
  GroundState gs{p, std::move(profile), 0, 0, 0, 0, 0, m, residual, amplitude, iterations};
  const double n = l2_norm(gs.profile), gn = grad_norm(gs.profile);
  gs.mass2 = n * n;
  gs.grad2 = gn * gn;
  gs.potential = potential_term(gs.profile, p.alpha, p.b);
  gs.energy = 0.5 * gs.grad2 - gs.potential / (p.alpha + 2);
  gs.cgn = weinstein_quotient(gs.profile, p);
  return gs;
}

void check_shape(const RadialField& q, const char* who) {
  const int J = q.size();
  for (int j = 0; j < J; ++j) {
    const double v = q[j].real();
    if (!(v > 0.0)) throw std::runtime_error(std::string(who) + ": profile not strictly positive");
    if (j + 1 < J && v > 1e-250 && !(q[j + 1].real() < v))
      throw std::runtime_error(std::string(who) + ": profile not strictly decreasing at node " +
                               std::to_string(j));
  }
}

}  // namespace

double smooth_region_residual(const RadialField& q, const ModelParams& p, double r_from) {
  const auto& g = q.grid();
  const int J = q.size();
  const double h = g.h();
  // sixth-order central weights
  static constexpr double d1[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static constexpr double d2[] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  double s = 0.0;
  for (int j = 3; j + 3 < J; ++j) {
    const double r = g.node(j);
    if (r < r_from) continue;
    double q1 = 0.0, q2 = 0.0;
    for (int k = -3; k <= 3; ++k) {
      q1 += d1[k + 3] * q[j + k].real();
      q2 += d2[k + 3] * q[j + k].real();
    }
    q1 /= h;
    q2 /= h * h;
    const double qj = q[j].real();
    const double res = -qj + q2 + (g.N() - 1) / r * q1 + nonlinearity(qj, r, p);
    s += g.weights()[j] * res * res;
  }
  return std::sqrt(s);
}

GroundState solve_shooting(const ModelParams& p, GridPtr grid, const ShootingOptions& o) {
  require_scope(p, o.allow_out_of_scope, "solve_shooting");
  const RadialGrid& g = *grid;
  const double r_end = std::max(g.r_max(), 60.0);
  auto fate = [&](double a) { return integrate(a, p, g, r_end, false, o).fate; };

  double lo, hi;
  if (o.bracket) {
    lo = o.bracket->first;
    hi = o.bracket->second;
    if (!(lo > 0.0 && hi > lo) || fate(lo) != Fate::Undershoot || fate(hi) != Fate::Overshoot)
      throw NoBracket(lo, hi);
  } else {
    lo = 1.0;
    int k = 0;
    while (fate(lo) != Fate::Undershoot && k++ < 60) lo *= 0.5;
    hi = 2.0 * lo;
    k = 0;
    for (Fate f = fate(hi); f != Fate::Overshoot && k++ < 60; f = fate(hi)) {
      if (f == Fate::Undershoot) lo = hi;
      hi *= 2.0;
    }
    if (fate(lo) != Fate::Undershoot || fate(hi) != Fate::Overshoot) throw NoBracket(lo, hi);
  }

  int it = 0;
  for (; it < o.max_bisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Fate f = fate(mid);
    if (f == Fate::Undecided) {
      lo = hi = mid;
      break;
    }
    (f == Fate::Undershoot ? lo : hi) = mid;
  }

  const Trajectory tl = integrate(lo, p, g, g.r_max(), true, o);
  const Trajectory th = integrate(hi, p, g, g.r_max(), true, o);
  const std::size_t n = std::min(tl.q.size(), th.q.size());
  const double q0 = 0.5 * (lo + hi);

  // last node where both trajectories agree and the solution is in its
  // linear decay regime
  std::size_t agree = 0;
  while (agree < n && std::abs(tl.q[agree] - th.q[agree]) <= o.agreement_tol * 0.5 * (tl.q[agree] + th.q[agree]))
    ++agree;
  auto mid_q = [&](std::size_t j) { return 0.5 * (tl.q[j] + th.q[j]); };
  auto in_decay = [&](std::size_t j) {
    const double ratio = 0.5 * (tl.dq[j] + th.dq[j]) / mid_q(j);
    return ratio > -1.5 && ratio < -0.5;
  };
  std::optional<std::size_t> match;
  for (std::size_t j = 0; j < agree; ++j)
    if (in_decay(j) && mid_q(j) < o.tail_threshold * q0) {
      match = j;
      break;
    }
  if (!match) {
    // Splice where the larger of two errors is smallest: disagreement of the
    // bracketing trajectories (growing-mode contamination) and the size of
    // the nonlinear term the linear tail neglects.
    double best = INFINITY;
    for (std::size_t j = 0; j < agree; ++j) {
      if (!in_decay(j)) continue;
      const double q = mid_q(j);
      const double split = std::abs(tl.q[j] - th.q[j]) / q;
      const double nonlin = std::pow(g.node(static_cast<int>(j)), -p.b) * std::pow(q, p.alpha);
      const double err = std::max(split, nonlin);
      if (err < best) {
        best = err;
        match = j;
      }
    }
  }
  if (!match) throw std::runtime_error("solve_shooting: no node in the decay regime; enlarge r_max");

  const int J = g.J();
  std::vector<cplx> v(J);
  const std::size_t m = *match;
  const double rm = g.node(static_cast<int>(m));
  const double tail_scale = mid_q(m) / decaying_mode(rm, p.N);
  for (int j = 0; j < J; ++j) {
    if (static_cast<std::size_t>(j) <= m)
      v[j] = mid_q(j);
    else
      v[j] = tail_scale * decaying_mode(g.node(j), p.N);
  }
  RadialField profile(grid, std::move(v));
  check_shape(profile, "solve_shooting");
  const double res = smooth_region_residual(profile, p, 1.0);
  return finish(p, std::move(profile), SolveMethod::Shooting, res, q0, it);
}

GroundState solve_fixedpoint(const ModelParams& p, GridPtr grid, const FixedPointOptions& o) {
  require_scope(p, o.allow_out_of_scope, "solve_fixedpoint");
  const RadialGrid& g = *grid;
  const int J = g.J();
  const double gamma = o.exponent.value_or((p.alpha + 1) / p.alpha);
  const auto st = laplacian_stencil(g);
  std::vector<double> lower(J), diag(J), upper(J);
  for (int j = 0; j < J; ++j) {
    lower[j] = -st.lower[j];
    diag[j] = 1.0 - st.diag[j];
    upper[j] = -st.upper[j];
  }
  const Tridiagonal<double> shifted(lower, diag, upper);
  const auto& w = g.weights();
  std::vector<double> rb(J);
  for (int j = 0; j < J; ++j) rb[j] = std::pow(g.node(j), -p.b);

  auto apply_shifted = [&](const std::vector<double>& q, int j) {
    double v = diag[j] * q[j];
    if (j > 0) v += lower[j] * q[j - 1];
    if (j + 1 < J) v += upper[j] * q[j + 1];
    return v;
  };

  std::vector<double> q(J), f(J), next(J);
  for (int j = 0; j < J; ++j) {
    const double r = g.node(j) / o.seed_width;
    q[j] = o.seed_amplitude * std::exp(-r * r);
  }
  std::vector<double> trace;
  double M = 0.0;
  for (int it = 1; it <= o.max_iter; ++it) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < J; ++j) {
      f[j] = rb[j] * std::pow(std::abs(q[j]), p.alpha) * q[j];
      num += w[j] * apply_shifted(q, j) * q[j];
      den += w[j] * f[j] * q[j];
    }
    if (!(den > 0.0)) throw NoConvergence("solve_fixedpoint: degenerate stabilising factor", trace);
    M = num / den;
    const double factor = std::pow(M, gamma);
    next = f;
    shifted.solve_in_place(next);
    double dist = 0.0;
    for (int j = 0; j < J; ++j) {
      next[j] *= factor;
      dist += w[j] * (next[j] - q[j]) * (next[j] - q[j]);
    }
    dist = std::sqrt(dist);
    trace.push_back(dist);
    q.swap(next);
    if (!std::isfinite(dist)) break;
    if (dist < o.tol) {
      // A stalled iteration (wrong exponent) can settle on c*Q with M != 1.
      if (std::abs(M - 1.0) > 1e-6)
        throw NoConvergence("solve_fixedpoint: iterates settled with M = " + std::to_string(M) + " != 1",
                            trace);
      std::vector<cplx> v(q.begin(), q.end());
      RadialField profile(grid, std::move(v));
      check_shape(profile, "solve_fixedpoint");
      const RadialField lap = laplacian_radial(profile);
      double res = 0.0;
      for (int j = 0; j < J; ++j) {
        const double e = -q[j] + lap[j].real() + rb[j] * std::pow(std::abs(q[j]), p.alpha) * q[j];
        res += w[j] * e * e;
      }
      return finish(p, std::move(profile), SolveMethod::FixedPoint, std::sqrt(res), q[0], it);
    }
  }
  throw NoConvergence("solve_fixedpoint: no convergence after " + std::to_string(o.max_iter) +
                          " iterations (last M = " + std::to_string(M) + ")",
                      trace);
}

double IdentityReport::max_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.rel_residual);
  return m;
}

IdentityReport verify_identities(const GroundState& gs) {
  const auto& p = gs.params;
  const double N = p.N, a = p.alpha, b = p.b;
  const double k1 = (N * a + 2 * b) / (4 - 2 * b - a * (N - 2));
  const double k2 = 2 * (a + 2) / (N * a + 2 * b);
  const double k3 = a * p.s_c / (N * a + 2 * b);
  auto row = [](std::string name, double lhs, double rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return IdentityRow{std::move(name), lhs, rhs, scale > 0 ? std::abs(lhs - rhs) / scale : 0.0};
  };
  IdentityReport r;
  r.rows.push_back(row("GS1", gs.grad2, k1 * gs.mass2));
  r.rows.push_back(row("GS2", gs.potential, k2 * gs.grad2));
  r.rows.push_back(row("EGS", gs.energy, k3 * gs.grad2));
  return r;
}

double weinstein_quotient(const RadialField& u, const ModelParams& p) {
  const double N = p.N, a = p.alpha, b = p.b;
  const double m = l2_norm(u), gn = grad_norm(u);
  if (m == 0.0 || gn == 0.0) return 0.0;
  const double pot = potential_term(u, a, b);
  return pot / (std::pow(gn, (N * a + 2 * b) / 2) * std::pow(m, (4 - 2 * b - a * (N - 2)) / 2));
}

SharpConstant sharp_constant(const GroundState& gs) {
  const auto& p = gs.params;
  if (!(p.s_c > 0.0 && p.s_c < 1.0)) throw std::invalid_argument("sharp_constant: requires 0 < s_c < 1");
  const double N = p.N, a = p.alpha, b = p.b;
  const double formula = 2 * (a + 2) / (N * a + 2 * b) *
                         std::pow((4 - 2 * b - a * (N - 2)) / (N * a + 2 * b), a * p.s_c / 2) /
                         std::pow(gs.mass2, a / 2);
  const double direct = weinstein_quotient(gs.profile, p);
  return {formula, direct, std::abs(formula - direct) / formula};
}

ProbeReport gn_maximality_probe(const GroundState& gs, int trials, std::uint64_t seed, double tol) {
  Rng rng(seed);
  const auto& grid = gs.profile.grid_ptr();
  const double reach = grid->r_max() / 8.0;
  const double cgn = weinstein_quotient(gs.profile, gs.params);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int K = static_cast<int>(rng.integer(1, 3));
    std::array<double, 3> amp{}, width{};
    for (int k = 0; k < K; ++k) {
      amp[k] = rng.uniform(-1.0, 1.0);
      width[k] = rng.uniform(0.1, 1.0) * reach;
    }
    amp[0] = std::abs(amp[0]) + 0.1;
    const RadialField u = RadialField::sample(grid, [&](double r) {
      double v = 0.0;
      for (int k = 0; k < K; ++k) v += amp[k] * std::exp(-(r / width[k]) * (r / width[k]));
      return v;
    });
    best = std::max(best, weinstein_quotient(u, gs.params));
  }
  return {trials, best, cgn, tol, best <= cgn * (1.0 + tol)};
}

}  // namespace inls
