#include "inls/exponents.hpp"

#include <stdexcept>

namespace inls {

namespace {

Rational checked_div(const Rational& num, const Rational& den, const char* what) {
  if (den == 0) throw std::domain_error(std::string("degenerate denominator in ") + what);
  return num / den;
}

std::string q_str(const Rational& q) { return q.str(); }

}  // namespace

EpsilonPolicy::EpsilonPolicy(const Rational& eps) : eps_(eps) {
  if (!(eps > 0) || !(eps < Rational(1, 100)))
    throw std::invalid_argument("EpsilonPolicy: eps must satisfy 0 < eps < 1/100");
}

EpsilonPolicy EpsilonPolicy::standard() { return EpsilonPolicy(Rational(1, 1000000)); }

StrichartzPair StrichartzPair::make(ExtendedRational q, ExtendedRational r, PairKind kind, Rational s) {
  if (q < ExtendedRational(1) || r < ExtendedRational(1))
    throw std::invalid_argument("StrichartzPair: exponents must be >= 1");
  if (kind == PairKind::L2) s = 0;
  return {std::move(q), std::move(r), kind, std::move(s)};
}

std::string StrichartzPair::class_label() const {
  switch (kind) {
    case PairKind::L2: return "L2";
    case PairKind::HsPlus: return "Hs(" + s.str() + ")";
    case PairKind::HsMinus: return "H-s(" + s.str() + ")";
  }
  return "?";
}

bool RRange::contains(const ExtendedRational& r) const {
  const bool lo_ok = lo_closed ? r >= lo : r > lo;
  const bool hi_ok = hi_closed ? r <= hi : r < hi;
  return lo_ok && hi_ok;
}

RRange l2_range(int N) {
  if (N >= 3) return {ExtendedRational(2), true, ExtendedRational(Rational(2 * N, N - 2)), true};
  if (N == 2) return {ExtendedRational(2), true, ExtendedRational::infinity(), false};
  return {ExtendedRational(2), true, ExtendedRational::infinity(), true};
}

Rational plus_dual(const Rational& a, const EpsilonPolicy& policy) {
  const Rational& e = policy.eps();
  return a * (a + e) / e;
}

std::optional<RRange> hs_range(int N, const Rational& s, const EpsilonPolicy& policy) {
  if (!(s > 0) || !(s < 1)) throw std::invalid_argument("Hs range: s must lie in (0,1)");
  const Rational& e = policy.eps();
  if (N >= 3) {
    return RRange{Rational(2 * N) / (N - 2 * s), false, Rational(2 * N, N - 2) - e, true};
  }
  if (N == 2) {
    const Rational a = 2 / (1 - s);
    return RRange{a, false, plus_dual(a, policy), true};
  }
  if (s >= Rational(1, 2)) return std::nullopt;
  return RRange{2 / (1 - 2 * s), false, ExtendedRational::infinity(), true};
}

std::optional<RRange> hneg_range(int N, const Rational& s, const EpsilonPolicy& policy) {
  if (!(s > 0) || !(s < 1)) throw std::invalid_argument("H^-s range: s must lie in (0,1)");
  const Rational& e = policy.eps();
  if (N >= 3) {
    return RRange{Rational(2 * N) / (N - 2 * s) + e, true, Rational(2 * N, N - 2) - e, true};
  }
  if (N == 2) {
    return RRange{2 / (1 - s) + e, true, plus_dual(2 / (1 + s), policy), true};
  }
  if (s >= Rational(1, 2)) return std::nullopt;
  return RRange{2 / (1 - 2 * s) + e, true, ExtendedRational::infinity(), true};
}

namespace {

// 2/q == rhs, with q >= 1.
bool scaling_holds(const ExtendedRational& q, const Rational& rhs) {
  if (q < ExtendedRational(1)) return false;
  return 2 * q.reciprocal().value() == rhs;
}

bool exponents_valid(const ExtendedRational& q, const ExtendedRational& r) {
  return q >= ExtendedRational(1) && r >= ExtendedRational(1);
}

}  // namespace

bool is_l2_admissible(const ExtendedRational& q, const ExtendedRational& r, int N) {
  if (!exponents_valid(q, r)) return false;
  const Rational rhs = Rational(N, 2) - N * r.reciprocal().value();
  return scaling_holds(q, rhs) && l2_range(N).contains(r);
}

bool is_hs_admissible(const ExtendedRational& q, const ExtendedRational& r, int N, const Rational& s,
                      const EpsilonPolicy& policy) {
  const auto range = hs_range(N, s, policy);
  if (!exponents_valid(q, r) || !range) return false;
  const Rational rhs = Rational(N, 2) - N * r.reciprocal().value() - s;
  return scaling_holds(q, rhs) && range->contains(r);
}

bool is_hneg_admissible(const ExtendedRational& q, const ExtendedRational& r, int N, const Rational& s,
                        const EpsilonPolicy& policy) {
  const auto range = hneg_range(N, s, policy);
  if (!exponents_valid(q, r) || !range) return false;
  const Rational rhs = Rational(N, 2) - N * r.reciprocal().value() + s;
  return scaling_holds(q, rhs) && range->contains(r);
}

bool is_admissible(const StrichartzPair& p, int N, const EpsilonPolicy& policy) {
  switch (p.kind) {
    case PairKind::L2: return is_l2_admissible(p.q, p.r, N);
    case PairKind::HsPlus: return is_hs_admissible(p.q, p.r, N, p.s, policy);
    case PairKind::HsMinus: return is_hneg_admissible(p.q, p.r, N, p.s, policy);
  }
  return false;
}

ExtendedRational dual_exponent(const ExtendedRational& a) {
  if (a < ExtendedRational(1)) throw std::invalid_argument("dual_exponent: a must be >= 1");
  if (a.is_infinite()) return ExtendedRational(1);
  if (a.value() == 1) return ExtendedRational::infinity();
  return ExtendedRational(a.value() / (a.value() - 1));
}

std::optional<std::string> theorem_scope_violation(const ExactParams& p) {
  const int N = p.N;
  const Rational& a = p.alpha;
  const Rational& b = p.b;
  if (N < 2) return "N >= 2";
  if (!(b > 0)) return "b > 0";
  const Rational bmax = N >= 3 ? Rational(1) : Rational(N, 3);
  if (!(b < bmax)) return "b < min(N/3, 1)";
  if (!(a > (4 - 2 * b) / N)) return "alpha > (4-2b)/N";
  if (N == 3 && !(a < 3 - 2 * b)) return "alpha < 2_* = 3-2b";
  if (N >= 4 && !(a < (4 - 2 * b) / (N - 2))) return "alpha < 2_* = (4-2b)/(N-2)";
  const Rational sc = p.s_c();
  if (!(sc > 0 && sc < 1)) return "0 < s_c < 1";
  return std::nullopt;
}

Rational default_theta(const ExactParams& p) {
  const Rational upper = std::min<Rational>(Rational(2) * (1 - p.b) / p.N, p.alpha);
  Rational theta = upper / 4;
  if (p.N == 3) {
    const Rational lower = Rational(2) * (1 - 3 * p.b) / 3;
    if (lower > 0 && theta <= lower) theta = (lower + upper) / 2;
  }
  return theta;
}

ThetaWindow claim2_theta_window(const ExactParams& p) {
  Rational lower = 0;
  if (p.N == 3) lower = std::max<Rational>(Rational(0), Rational(2) * (1 - 3 * p.b) / 3);
  return {lower, Rational(2) * (1 - p.b) / p.N};
}

bool FamilyCertificate::all_hold() const {
  for (const auto& pc : pairs)
    if (!pc.admissible) return false;
  for (const auto& id : identities)
    if (id.residual != 0) return false;
  for (const auto& rc : ranges)
    if (!rc.holds) return false;
  return true;
}

namespace formulas {

Lemma43 lemma43(const Rational& a, const Rational& b, const Rational& t) {
  const Rational num = 4 * a * (a + 1 - t);
  return {checked_div(num, 4 - 2 * b - a, "k"),
          checked_div(6 * a * (a + 1 - t), (4 - 2 * b) * (a - t) + a, "p"),
          checked_div(num, a * (3 * a - 2 + 2 * b) - t * (3 * a - 4 + 2 * b), "l")};
}

Claim1 claim1(int N, const Rational& a, const Rational& b, const Rational& t) {
  const Rational num = a * (a + 2 - t);
  return {checked_div(4 * num, a * (N * a + 2 * b) - t * (N * a - 4 + 2 * b), "q_hat"),
          checked_div(N * num, a * (N - b) - t * (2 - b), "r_hat"),
          checked_div(2 * num, a * (N * (a + 1 - t) - 2 + 2 * b) - (4 - 2 * b) * (1 - t), "a_tilde"),
          checked_div(2 * num, 4 - 2 * b - (N - 2) * a, "a_hat")};
}

Claim2 claim2(int N, const Rational& a, const Rational& b, const Rational& t, const Rational& eps) {
  if (N >= 3) {
    const Rational D = 4 - 2 * b - a * (N - 2);
    const Rational num_a = 4 * a * (N + 2);
    const Rational num_r = 2 * a * N * (N + 2);
    return {checked_div(num_a, N * D, "a"),
            checked_div(num_r, (4 - 2 * b) * (N + 2) - N * D, "r"),
            checked_div(num_a, num_a - (a + 1 - t) * N * D, "a_bar"),
            checked_div(num_r, 2 * (N + 2) * (a * (N - 2) - (2 - b)) + N * D * (a + 1 - t), "r_bar")};
  }
  if (N == 2) {
    const Rational num = 2 * a * (a + 1 - t);
    return {checked_div(num, 2 - b + eps, "a"), checked_div(num, (2 - b) * (a - t) - eps, "r"),
            checked_div(2 * a, 2 * a - (2 - b) - eps, "a_bar"), checked_div(2 * a, eps, "r_bar")};
  }
  throw std::invalid_argument("claim2 family requires N >= 2");
}

}  // namespace formulas

namespace {

void require_scope(const ExactParams& p, const char* family) {
  if (auto v = theorem_scope_violation(p))
    throw std::invalid_argument(std::string(family) + ": theorem scope violated: " + *v);
}

void require_theta(const Rational& theta, const Rational& alpha, const char* family) {
  if (!(theta > 0)) throw std::invalid_argument(std::string(family) + ": theta > 0 violated");
  if (!(theta < alpha)) throw std::invalid_argument(std::string(family) + ": theta < alpha violated");
}

PairCheck check(const std::string& name, const Rational& q, const Rational& r, PairKind kind, const Rational& s,
                int N, const EpsilonPolicy& policy) {
  PairCheck pc{name, StrichartzPair{q, r, kind, kind == PairKind::L2 ? Rational(0) : s}, false};
  pc.admissible = q >= 1 && r >= 1 && is_admissible(pc.pair, N, policy);
  return pc;
}

Rational dual(const Rational& a) { return a / (a - 1); }

}  // namespace

Lemma43Family family_lemma43(const Rational& alpha, const Rational& b, const Rational& theta,
                             const EpsilonPolicy& policy) {
  const ExactParams p{3, alpha, b};
  require_scope(p, "lemma43");
  require_theta(theta, alpha, "lemma43");
  const auto f = formulas::lemma43(alpha, b, theta);
  const Rational sc = p.s_c();
  Lemma43Family out{f.k, f.p, f.l, {"lemma43", p, theta, {}, {}, {}}};
  auto& c = out.cert;
  c.pairs.push_back(check("(l,p)", f.l, f.p, PairKind::L2, 0, 3, policy));
  c.pairs.push_back(check("(k,p)", f.k, f.p, PairKind::HsPlus, sc, 3, policy));
  c.identities.push_back({"time_holder", Rational(1, 2) - (alpha - theta) / f.k - 1 / f.l});
  c.ranges.push_back({"6/(3-2s_c)<p", Rational(6) / (3 - 2 * sc) < f.p});
  c.ranges.push_back({"p<6", f.p < 6});
  return out;
}

Claim1Family family_claim1(const Rational& alpha, const Rational& b, const Rational& theta, int N,
                           const EpsilonPolicy& policy) {
  const ExactParams p{N, alpha, b};
  require_scope(p, "claim1");
  require_theta(theta, alpha, "claim1");
  const auto f = formulas::claim1(N, alpha, b, theta);
  const Rational sc = p.s_c();
  Claim1Family out{f.q_hat, f.r_hat, f.a_tilde, f.a_hat, {"claim1", p, theta, {}, {}, {}}};
  auto& c = out.cert;
  c.pairs.push_back(check("(q_hat,r_hat)", f.q_hat, f.r_hat, PairKind::L2, 0, N, policy));
  c.pairs.push_back(check("(a_hat,r_hat)", f.a_hat, f.r_hat, PairKind::HsPlus, sc, N, policy));
  c.pairs.push_back(check("(a_tilde,r_hat)", f.a_tilde, f.r_hat, PairKind::HsMinus, sc, N, policy));
  const Rational inv_dual = 1 - 1 / f.a_tilde;  // 1/a_tilde'
  c.identities.push_back({"splitting", inv_dual - (alpha - theta) / f.a_hat - 1 / f.a_hat});
  return out;
}

Claim2Family family_claim2(const Rational& alpha, const Rational& b, const Rational& theta, int N,
                           const Rational& eps, const EpsilonPolicy& policy) {
  const ExactParams p{N, alpha, b};
  require_scope(p, "claim2");
  if (N >= 3) {
    const auto w = claim2_theta_window(p);
    if (!(theta > w.lower))
      throw std::invalid_argument("claim2: theta > " + q_str(w.lower) + " violated");
    if (!(theta < w.upper))
      throw std::invalid_argument("claim2: theta < 2(1-b)/N = " + q_str(w.upper) + " violated");
    require_theta(theta, alpha, "claim2");
  } else {
    require_theta(theta, alpha, "claim2");
    if (!(eps > 0)) throw std::invalid_argument("claim2: eps > 0 violated");
    if (!((2 - b) * (alpha - theta) - eps > 0))
      throw std::invalid_argument("claim2: (2-b)(alpha-theta) > eps violated");
    if (!(2 * alpha - (2 - b) - eps > 0))
      throw std::invalid_argument("claim2: 2 alpha - (2-b) > eps violated");
  }
  const auto f = formulas::claim2(N, alpha, b, theta, eps);
  const Rational sc = p.s_c();
  Claim2Family out{f.a, f.r, f.a_bar, f.r_bar, {N >= 3 ? "claim2" : "claim2_n2", p, theta, {}, {}, {}}};
  auto& c = out.cert;
  c.pairs.push_back(check("(a,r)", f.a, f.r, PairKind::HsPlus, sc, N, policy));
  c.pairs.push_back(check("(a_bar,r_bar)", f.a_bar, f.r_bar, PairKind::HsMinus, sc, N, policy));
  const bool dual_ok = f.a_bar > 1;
  c.identities.push_back({"holder", dual_ok ? f.a - (alpha + 1 - theta) * dual(f.a_bar) : Rational(1)});
  if (N >= 3) {
    const Rational lo = Rational(2 * N) / (N - 2 * sc);
    const Rational hi = Rational(2 * N, N - 2);
    c.ranges.push_back({"2N/(N-2s_c)<r", lo < f.r});
    c.ranges.push_back({"r<2N/(N-2)", f.r < hi});
    c.ranges.push_back({"2N/(N-2s_c)<r_bar", lo < f.r_bar});
    c.ranges.push_back({"r_bar<2N/(N-2)", f.r_bar < hi});
  } else {
    c.ranges.push_back({"r_bar>2alpha/(2-b)", f.r_bar > 2 * alpha / (2 - b)});
    c.ranges.push_back({"r_bar<=((2/(1+s_c))^+)'", f.r_bar <= plus_dual(2 / (1 + sc), policy)});
  }
  return out;
}

std::vector<Equivalence> appendix_checks(int N, const Rational& a, const Rational& b, const Rational& t,
                                         const Rational& eps) {
  std::vector<Equivalence> out;
  if (N == 3) {
    const Rational den_p = (4 - 2 * b) * (a - t) + a;
    const bool cond = a < 4 - 2 * b;
    out.push_back({"A1:(4-2b)(alpha-theta)+alpha<(4-2b)(alpha+1-theta)", true,
                   den_p < (4 - 2 * b) * (a + 1 - t), cond});
    const bool ok = den_p > 0 && t < a && b < 2;
    if (ok) {
      const Rational p = 6 * a * (a + 1 - t) / den_p;
      out.push_back({"A1:3alpha/(2-b)<p", true, 3 * a / (2 - b) < p, cond});
      out.push_back({"A1:p<6", true, p < 6, cond});
    } else {
      out.push_back({"A1:3alpha/(2-b)<p", false, false, cond});
      out.push_back({"A1:p<6", false, false, cond});
    }
  }
  if (N >= 3) {
    const bool cond = a < (4 - 2 * b) / (N - 2);
    const bool ok = b < 2;
    const Rational D = 4 - 2 * b - a * (N - 2);
    if (ok) {
      const Rational r = 2 * a * N * (N + 2) / ((4 - 2 * b) * (N + 2) - N * D);
      out.push_back({"A2:r<2N/(N-2)", true, r < Rational(2 * N, N - 2), cond});
      out.push_back({"A2:r>N alpha/(2-b)", true, r > N * a / (2 - b), cond});
    }
    const Rational den_rbar = 2 * (N + 2) * (a * (N - 2) - (2 - b)) + N * D * (a + 1 - t);
    const bool ok_bar = D > 0 && den_rbar > 0 && b < 2;
    Rational rbar = 0;
    if (ok_bar) rbar = 2 * a * N * (N + 2) / den_rbar;
    out.push_back({"Remark:r_bar<2N/(N-2)", ok_bar, ok_bar && rbar < Rational(2 * N, N - 2),
                   a * N - 2 - t * N > 0});
    out.push_back({"Remark:r_bar>N alpha/(2-b)", ok_bar, ok_bar && rbar > N * a / (2 - b),
                   a < Rational(N + 4) / N + t});
  }
  if (N == 2) {
    const bool ok = eps > 0 && b < 2;
    out.push_back({"A3:r_bar>2alpha/(2-b)", ok, ok && 2 * a / eps > 2 * a / (2 - b), eps < 2 - b});
  }
  return out;
}

std::vector<std::string> certificate_header() {
  return {"family", "N", "alpha", "b", "theta", "q", "r", "class", "admissible", "identity_residual"};
}

std::vector<std::vector<std::string>> certificate_rows(const FamilyCertificate& cert) {
  std::string residual;
  for (const auto& id : cert.identities) {
    if (!residual.empty()) residual += ';';
    residual += id.residual.str();
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& pc : cert.pairs) {
    rows.push_back({cert.family, std::to_string(cert.params.N), cert.params.alpha.str(), cert.params.b.str(),
                    cert.theta.str(), pc.pair.q.to_string(), pc.pair.r.to_string(), pc.pair.class_label(),
                    pc.admissible ? "true" : "false", residual});
  }
  return rows;
}

}  // namespace inls
