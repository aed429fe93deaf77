#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "inls/evolve.hpp"
#include "inls/exponents.hpp"
#include "inls/rng.hpp"

namespace inls::testing {

inline Rational frac(long long n, long long d = 1) { return Rational(n, d); }

struct SweepPoint {
  ExactParams params;
  Rational theta;
};

// Random in-scope (N, alpha, b, theta) on a grid of step 1/1000 of each range,
// with theta drawn from (lower, default_theta].
inline SweepPoint random_in_scope(Rng& rng) {
  const int N = static_cast<int>(rng.integer(2, 5));
  const Rational bmax = N >= 3 ? frac(1) : frac(2, 3);
  const Rational b = bmax * frac(rng.integer(1, 999), 1000);
  const Rational lo = (4 - 2 * b) / N;
  Rational hi;
  if (N == 2) hi = lo + 6;
  else if (N == 3) hi = 3 - 2 * b;
  else hi = (4 - 2 * b) / (N - 2);
  const Rational alpha = lo + (hi - lo) * frac(rng.integer(1, 999), 1000);
  const ExactParams p{N, alpha, b};
  const Rational dflt = default_theta(p);
  const Rational lower = N == 3 ? std::max<Rational>(Rational(0), frac(2) * (1 - 3 * b) / 3) : Rational(0);
  const Rational theta = lower + (dflt - lower) * frac(rng.integer(1, 1000), 1000);
  return {p, theta};
}

// Centred differences of the recorded virial series against the recorded
// derivatives, as constants C with error = C * scale * (dt_rec^2 + h^2).
struct FdConstants {
  double first;   // d/dt zR against zR_prime
  double second;  // d/dt zR_prime against zR_second_direct
};

inline FdConstants fd_constants(const EvolutionTrace& tr) {
  double e1 = 0, e2 = 0, s1 = 0, s2 = 0, dt_rec = 0;
  for (std::size_t i = 1; i + 1 < tr.times.size(); ++i) {
    const double D = tr.times[i + 1] - tr.times[i - 1];
    dt_rec = std::max(dt_rec, 0.5 * D);
    const double d1 = (tr.zR_series[i + 1] - tr.zR_series[i - 1]) / D;
    const double d2 = (tr.zR_prime_series[i + 1] - tr.zR_prime_series[i - 1]) / D;
    e1 = std::max(e1, std::abs(d1 - tr.zR_prime_series[i]));
    e2 = std::max(e2, std::abs(d2 - tr.zR_second_direct_series[i]));
    s1 = std::max(s1, std::abs(tr.zR_prime_series[i]));
    s2 = std::max(s2, std::abs(tr.zR_second_direct_series[i]));
  }
  const double denom = dt_rec * dt_rec + tr.h * tr.h;
  return {e1 / (s1 * denom), e2 / (s2 * denom)};
}

// Weighted l2 distance between |u| and a real profile on the same grid.
inline double modulus_distance(const RadialField& u, const RadialField& q) {
  const auto& w = u.grid().weights();
  double s = 0;
  for (int j = 0; j < u.size(); ++j) {
    const double d = std::abs(u[j]) - q[j].real();
    s += w[j] * d * d;
  }
  return std::sqrt(s);
}

}  // namespace inls::testing
