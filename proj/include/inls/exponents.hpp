#pragma once

#include <optional>
#include <string>
#include <vector>

#include "inls/rational.hpp"

namespace inls {

// Realizes a^+ = a + eps and a^- = a - eps. One policy per run.
class EpsilonPolicy {
 public:
  explicit EpsilonPolicy(const Rational& eps);  // requires 0 < eps < 1/100
  static EpsilonPolicy standard();              // eps = 1/10^6
  const Rational& eps() const { return eps_; }

 private:
  Rational eps_;
};

enum class PairKind { L2, HsPlus, HsMinus };

struct StrichartzPair {
  ExtendedRational q;
  ExtendedRational r;
  PairKind kind;
  Rational s;  // regularity index; 0 for L2

  static StrichartzPair make(ExtendedRational q, ExtendedRational r, PairKind kind, Rational s = 0);
  std::string class_label() const;
};

bool is_l2_admissible(const ExtendedRational& q, const ExtendedRational& r, int N);
bool is_hs_admissible(const ExtendedRational& q, const ExtendedRational& r, int N, const Rational& s,
                      const EpsilonPolicy& policy);
bool is_hneg_admissible(const ExtendedRational& q, const ExtendedRational& r, int N, const Rational& s,
                        const EpsilonPolicy& policy);
bool is_admissible(const StrichartzPair& p, int N, const EpsilonPolicy& policy);

ExtendedRational dual_exponent(const ExtendedRational& a);

// ((a^+))' : the exponent with 1/a = 1/(a^+)' + 1/a^+.
Rational plus_dual(const Rational& a, const EpsilonPolicy& policy);

// Allowed r-interval for a class; eps-shifted endpoints are closed.
struct RRange {
  ExtendedRational lo;
  bool lo_closed;
  ExtendedRational hi;
  bool hi_closed;
  bool contains(const ExtendedRational& r) const;
};
RRange l2_range(int N);
std::optional<RRange> hs_range(int N, const Rational& s, const EpsilonPolicy& policy);
std::optional<RRange> hneg_range(int N, const Rational& s, const EpsilonPolicy& policy);

struct ExactParams {
  int N;
  Rational alpha;
  Rational b;
  Rational s_c() const { return Rational(N, 2) - (2 - b) / alpha; }
};

// Empty when the exact-arithmetic theorem hypotheses hold; otherwise names
// the first violated inequality.
std::optional<std::string> theorem_scope_violation(const ExactParams& p);

Rational default_theta(const ExactParams& p);

struct PairCheck {
  std::string name;
  StrichartzPair pair;
  bool admissible;
};

struct IdentityCheck {
  std::string name;
  Rational residual;
};

struct RangeCheck {
  std::string name;
  bool holds;
};

struct FamilyCertificate {
  std::string family;
  ExactParams params;
  Rational theta;
  std::vector<PairCheck> pairs;
  std::vector<IdentityCheck> identities;
  std::vector<RangeCheck> ranges;
  bool all_hold() const;
};

struct Lemma43Family {
  Rational k, p, l;
  FamilyCertificate cert;
};
struct Claim1Family {
  Rational q_hat, r_hat, a_tilde, a_hat;
  FamilyCertificate cert;
};
struct Claim2Family {
  Rational a, r, a_bar, r_bar;
  FamilyCertificate cert;
};

// Raw formulas, no hypothesis checks. Throw std::domain_error on a zero
// denominator.
namespace formulas {
struct Lemma43 { Rational k, p, l; };
struct Claim1 { Rational q_hat, r_hat, a_tilde, a_hat; };
struct Claim2 { Rational a, r, a_bar, r_bar; };
Lemma43 lemma43(const Rational& alpha, const Rational& b, const Rational& theta);
Claim1 claim1(int N, const Rational& alpha, const Rational& b, const Rational& theta);
Claim2 claim2(int N, const Rational& alpha, const Rational& b, const Rational& theta, const Rational& eps);
}  // namespace formulas

Lemma43Family family_lemma43(const Rational& alpha, const Rational& b, const Rational& theta,
                             const EpsilonPolicy& policy);
Claim1Family family_claim1(const Rational& alpha, const Rational& b, const Rational& theta, int N,
                           const EpsilonPolicy& policy);
// eps is only used for N = 2.
Claim2Family family_claim2(const Rational& alpha, const Rational& b, const Rational& theta, int N,
                           const Rational& eps, const EpsilonPolicy& policy);

// theta window for the claim-2 family: lower < theta < upper (N >= 3).
struct ThetaWindow {
  Rational lower;
  Rational upper;
};
ThetaWindow claim2_theta_window(const ExactParams& p);

// An equivalence "lhs <=> rhs" from the appendix algebra. `applicable` is
// false when the sign hypotheses used to derive it fail (for example a
// negative denominator); such samples carry no claim.
struct Equivalence {
  std::string name;
  bool applicable;
  bool lhs;
  bool rhs;
  bool holds() const { return !applicable || lhs == rhs; }
};

std::vector<Equivalence> appendix_checks(int N, const Rational& alpha, const Rational& b,
                                         const Rational& theta, const Rational& eps);

// Certificate CSV row: family,N,alpha,b,theta,q,r,class,admissible,identity_residual
std::vector<std::vector<std::string>> certificate_rows(const FamilyCertificate& cert);
std::vector<std::string> certificate_header();

}  // namespace inls
