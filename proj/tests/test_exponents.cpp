#include <stdexcept>
#include <string>

#include "doctest.h"
#include "inls/exponents.hpp"
#include "support.hpp"

using namespace inls;
using inls::testing::frac;

namespace {

const EpsilonPolicy kPol = EpsilonPolicy::standard();
const ExtendedRational kInf = ExtendedRational::infinity();

ExtendedRational xr(long long n, long long d = 1) { return ExtendedRational(Rational(n, d)); }

bool cert_ok(const FamilyCertificate& c) {
  for (const auto& p : c.pairs)
    if (!p.admissible) MESSAGE(c.family << " " << p.name << " not admissible");
  for (const auto& r : c.ranges)
    if (!r.holds) MESSAGE(c.family << " range " << r.name << " fails");
  for (const auto& i : c.identities)
    if (i.residual != 0) MESSAGE(c.family << " identity " << i.name << " = " << i.residual.str());
  return c.all_hold();
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("7/20") == frac(7, 20));
  CHECK(parse_rational("-0.25") == frac(-1, 4));
  CHECK(parse_rational("1.5e-3") == frac(3, 2000));
  CHECK(parse_rational("0.3") == frac(3, 10));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK(xr(0).reciprocal() == kInf);
  CHECK(kInf.reciprocal() == xr(0));
}

TEST_CASE("L2 admissibility") {
  CHECK(is_l2_admissible(xr(2), xr(6), 3));
  for (int N : {1, 2, 3, 4, 7}) CHECK(is_l2_admissible(kInf, xr(2), N));
  for (int N : {2, 3, 4}) {
    const auto g = xr(2 * (N + 2), N);
    CHECK(is_l2_admissible(g, g, N));
  }
  CHECK_FALSE(is_l2_admissible(xr(2), xr(5), 3));
  CHECK_FALSE(is_l2_admissible(xr(2), kInf, 2));  // endpoint excluded in 2D
  CHECK(is_l2_admissible(xr(4), kInf, 1));
  CHECK_FALSE(is_l2_admissible(xr(1, 2), xr(6), 3));
}

TEST_CASE("Hs admissibility examples") {
  const Rational sc = frac(13, 20);
  // (k, p) for alpha = 2, b = 3/10, theta = 1/5; oracle values
  const auto f = formulas::lemma43(2, frac(3, 10), frac(1, 5));
  CHECK(f.k == 16);
  CHECK(f.p == frac(120, 29));
  CHECK(f.l == frac(80, 31));
  CHECK(is_hs_admissible(f.k, f.p, 3, sc, kPol));
  // (inf, 2N/(N-2s)) satisfies scaling but is outside the open lower end
  CHECK_FALSE(is_hs_admissible(kInf, ExtendedRational(Rational(6) / (3 - 2 * sc)), 3, sc, kPol));
  // N = 2, s = 1/2, r = 8: N/2 - N/r - s = 1/4, so q = 8; q = 8/3 fails scaling
  CHECK(is_hs_admissible(xr(8), xr(8), 2, frac(1, 2), kPol));
  CHECK_FALSE(is_hs_admissible(xr(8, 3), xr(8), 2, frac(1, 2), kPol));
  CHECK_THROWS_AS(is_hs_admissible(xr(4), xr(4), 3, frac(0), kPol), std::invalid_argument);
  CHECK_THROWS_AS(is_hs_admissible(xr(4), xr(4), 3, frac(1), kPol), std::invalid_argument);
}

TEST_CASE("H-s admissibility examples") {
  const auto c = formulas::claim1(3, 2, frac(3, 10), frac(1, 10));
  CHECK(c.q_hat == frac(1560, 647));
  CHECK(c.r_hat == frac(2340, 523));
  CHECK(c.a_tilde == frac(780, 577));
  CHECK(c.a_hat == frac(78, 7));
  CHECK(is_hneg_admissible(c.a_tilde, c.r_hat, 3, frac(13, 20), kPol));

  const auto d = formulas::claim2(4, frac(7, 5), frac(1, 5), frac(1, 20), 0);
  CHECK(d.a == frac(21, 2));
  CHECK(d.r == frac(84, 23));
  CHECK(d.a_bar == frac(210, 163));
  CHECK(d.r_bar == frac(210, 61));
  const Rational sc4 = ExactParams{4, frac(7, 5), frac(1, 5)}.s_c();
  CHECK(is_hneg_admissible(d.a_bar, d.r_bar, 4, sc4, kPol));
  CHECK(is_hs_admissible(d.a, d.r, 4, sc4, kPol));

  CHECK_FALSE(is_hneg_admissible(xr(2), xr(2), 3, frac(1, 2), kPol));
}

TEST_CASE("dual exponent") {
  CHECK(dual_exponent(xr(2)) == xr(2));
  CHECK(dual_exponent(xr(1)) == kInf);
  CHECK(dual_exponent(kInf) == xr(1));
  CHECK(dual_exponent(xr(4, 3)) == xr(4));
  CHECK_THROWS_AS(dual_exponent(xr(1, 2)), std::invalid_argument);
}

TEST_CASE("epsilon policy") {
  CHECK(kPol.eps() == frac(1, 1000000));
  CHECK_THROWS_AS(EpsilonPolicy(frac(0)), std::invalid_argument);
  CHECK_THROWS_AS(EpsilonPolicy(frac(1, 100)), std::invalid_argument);
  // closed eps-shifted endpoint
  const auto r = hneg_range(3, frac(13, 20), kPol);
  REQUIRE(r);
  CHECK(r->contains(r->lo));
  CHECK(r->contains(r->hi));
}

TEST_CASE("lemma43 family") {
  const auto f = family_lemma43(2, frac(3, 10), frac(1, 5), kPol);
  CHECK(cert_ok(f.cert));
  const Rational sc = frac(13, 20);
  CHECK(Rational(6) / (3 - 2 * sc) < f.p);
  CHECK(f.p < 6);
  const auto g = family_lemma43(2, frac(3, 10), frac(7, 60), kPol);
  CHECK(g.k == frac(346, 21));
  CHECK(g.p == frac(10380, 2521));
  CHECK(g.l == frac(6920, 2669));
  CHECK(cert_ok(g.cert));
  CHECK_THROWS_AS(family_lemma43(2, frac(1, 2), frac(1, 5), kPol), std::invalid_argument);
  CHECK_THROWS_AS(family_lemma43(2, frac(3, 10), frac(0), kPol), std::invalid_argument);
}

TEST_CASE("claim1 family") {
  const auto f = family_claim1(2, frac(3, 10), frac(1, 10), 3, kPol);
  CHECK(cert_ok(f.cert));
  REQUIRE(f.cert.identities.size() == 1);
  CHECK(f.cert.identities[0].residual == 0);

  const auto g = family_claim1(frac(6, 5), frac(1, 4), frac(1, 20), 4, kPol);
  CHECK(g.q_hat == frac(3024, 1259));
  CHECK(g.r_hat == frac(6048, 1765));
  CHECK(g.a_tilde == frac(1512, 1039));
  CHECK(g.a_hat == frac(378, 55));
  CHECK(cert_ok(g.cert));
  for (const auto& p : g.cert.pairs) CHECK(p.admissible);
  // the form with 1/q_hat in place of 1/a_hat does not balance
  const Rational alt = (1 - 1 / g.a_tilde) - (frac(6, 5) - frac(1, 20)) / g.a_hat - 1 / g.q_hat;
  CHECK(alt == frac(-13, 48));

  const Rational a = 2, b = frac(3, 10);
  CHECK(formulas::claim1(3, a, b, 0).q_hat == 4 * a * (a + 2) / (a * (3 * a + 2 * b)));
  CHECK(formulas::claim1(3, a, b, 0).q_hat == frac(80, 33));
  const auto h = formulas::claim1(3, a, b, frac(7, 60));
  CHECK(h.q_hat == frac(9320, 3869));
  CHECK(h.r_hat == frac(13980, 3121));
  CHECK(h.a_tilde == frac(4660, 3449));
  CHECK(h.a_hat == frac(233, 21));
}

TEST_CASE("claim2 family") {
  const auto f = family_claim2(2, frac(3, 10), frac(3, 10), 3, 0, kPol);
  CHECK(f.a == frac(200, 21));
  CHECK(f.r == frac(75, 16));
  CHECK(f.a_bar == frac(2000, 1433));
  CHECK(f.r_bar == frac(1000, 239));
  CHECK(cert_ok(f.cert));
  CHECK(f.cert.ranges.size() == 4);
  CHECK(f.cert.identities[0].residual == 0);

  const auto g = family_claim2(3, frac(1, 5), frac(1, 10), 2, frac(1, 100), kPol);
  CHECK(g.a == frac(2340, 181));
  CHECK(g.r == frac(2340, 521));
  CHECK(g.a_bar == frac(600, 419));
  CHECK(g.r_bar == 600);
  CHECK(g.cert.family == "claim2_n2");
  CHECK(cert_ok(g.cert));

  const auto h = family_claim2(2, frac(3, 10), frac(7, 60), 3, 0, kPol);
  CHECK(h.a_bar == frac(4000, 2789));
  CHECK(h.r_bar == frac(6000, 1511));

  // theta window for N = 3, b = 3/10 is (1/15, 7/15)
  const auto w = claim2_theta_window({3, 2, frac(3, 10)});
  CHECK(w.lower == frac(1, 15));
  CHECK(w.upper == frac(7, 15));
  try {
    family_claim2(2, frac(3, 10), frac(1, 20), 3, 0, kPol);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("theta >") != std::string::npos);
  }
  CHECK_THROWS_AS(family_claim2(2, frac(3, 10), frac(1, 2), 3, 0, kPol), std::invalid_argument);
}

TEST_CASE("default theta") {
  CHECK(default_theta({3, 2, frac(3, 10)}) == frac(7, 60));
  // lower bound inactive when b >= 1/3
  CHECK(default_theta({3, 2, frac(2, 5)}) == frac(1, 10));
  CHECK(default_theta({4, frac(6, 5), frac(1, 4)}) == frac(3, 32));
}

TEST_CASE("certificate rows") {
  const auto f = family_claim1(2, frac(3, 10), frac(1, 10), 3, kPol);
  const auto rows = certificate_rows(f.cert);
  CHECK(rows.size() == 3);
  CHECK(certificate_header().size() == 10);
  for (const auto& r : rows) {
    CHECK(r.size() == 10);
    CHECK(r[8] == "true");
    CHECK(r[9] == "0");
  }
}

TEST_CASE("property: families certify on random in-scope points") {
  Rng rng(2024);
  const Rational family_eps = frac(1, 100);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto pt = inls::testing::random_in_scope(rng);
    const auto& p = pt.params;
    REQUIRE_FALSE(theorem_scope_violation(p));
    bool ok = cert_ok(family_claim1(p.alpha, p.b, pt.theta, p.N, kPol).cert);
    ok = ok && cert_ok(family_claim2(p.alpha, p.b, pt.theta, p.N, family_eps, kPol).cert);
    if (p.N == 3) ok = ok && cert_ok(family_lemma43(p.alpha, p.b, pt.theta, kPol).cert);
    if (!ok) {
      ++failures;
      MESSAGE("N=" << p.N << " alpha=" << p.alpha.str() << " b=" << p.b.str() << " theta=" << pt.theta.str());
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("property: duality involution and the plus rule") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Rational a = 1 + frac(rng.integer(1, 100000), rng.integer(1, 1000));
    CHECK(dual_exponent(dual_exponent(ExtendedRational(a))) == ExtendedRational(a));
    const EpsilonPolicy pol(frac(1, rng.integer(101, 1000000)));
    const Rational ap = a + pol.eps();
    CHECK(1 / a == 1 / plus_dual(a, pol) + 1 / ap);
  }
}

TEST_CASE("property: appendix equivalences in both directions") {
  Rng rng(99);
  int applicable = 0;
  for (int i = 0; i < 500; ++i) {
    const int N = static_cast<int>(rng.integer(2, 5));
    // deliberately wider than the theorem scope so both truth values occur
    const Rational b = frac(rng.integer(1, 199), 100);
    const Rational a = frac(rng.integer(1, 800), 100);
    const Rational t = a * frac(rng.integer(1, 99), 100);
    for (const auto& e : appendix_checks(N, a, b, t, frac(1, 100))) {
      if (!e.applicable) continue;
      ++applicable;
      if (!e.holds()) MESSAGE(e.name << " N=" << N << " a=" << a.str() << " b=" << b.str() << " t=" << t.str());
      CHECK(e.holds());
    }
  }
  CHECK(applicable > 1000);
}
