#pragma once

#include <cstdint>

#include "mdd/common.hpp"
#include "mdd/ntheory.hpp"

namespace mdd {

// Frozen reference constants for the twisted divisor main terms and the
// second-moment prediction; moment_c is recomputed from zeta32/zeta3 at
// first use and must land in (0.654, 0.655).
struct VoronoiConstants {
  double gamma = 0.5772156649015329;   // Euler-Mascheroni
  double zeta32 = 2.612375348685488;   // zeta(3/2)
  double zeta3 = 1.202056903159594;    // zeta(3)
  double moment_c = 0.0;               // zeta(3/2)^4 / (6 pi^2 zeta(3))

  static const VoronoiConstants& get();
};

// (log x + 2 gamma - 1 - 2 log q) / q: coefficient of the linear main term
// x * divisor_mean(q, x) of the twisted partial sums.
double divisor_mean(int64_t q, double x);

// (log x + 2 gamma - 2 log q) / q = d/dx [x * divisor_mean(q, x)].
double divisor_density(int64_t q, double x);

// Residue-class d2 sums for one (q, x); reused across twists a at fixed q.
struct ResidueSumCache {
  int64_t q = 0;
  int64_t x = 0;
  std::vector<int64_t> sums;
};

// S2(a/q; x) = sum_{n<=x} d2(n) e(a n / q), exact by bucketing n mod q.
cplx divisor_exp_sum_rational(int64_t a, int64_t q, int64_t x,
                              const CumulativeDivisor& cum,
                              ResidueSumCache* cache = nullptr);

// S2(a/q; floor(x)) - x * divisor_mean(q, x): the full residual of the
// twisted sum against its linear main term.
cplx twisted_error_exact(int64_t a, int64_t q, double x,
                         const CumulativeDivisor& cum,
                         ResidueSumCache* cache = nullptr);

// Truncated oscillatory expansion of the same residual:
//   (pi sqrt 2)^-1 q^{1/2} x^{1/4}
//     sum_{n<=N} d2(n) e(-n abar/q) n^{-3/4} cos(4 pi sqrt(n x)/q - pi/4)
// with abar the inverse of a mod q (abar = 0 when q = 1). The table must
// cover [1, N].
cplx twisted_error_series(int64_t a, int64_t q, double x, int64_t N,
                          const SieveTable& d2);

// (X+H) divisor_mean(q, X+H) - X divisor_mean(q, X); equals the integral
// of divisor_density over [X, X+H].
double boundary_main_term(int64_t q, int64_t X, int64_t H);

struct ReflectionResult {
  cplx value{};
  bool degenerate = false;      // reflected range held no integer
  bool outside_regime = false;  // q|beta| < 0.1 / sqrt(X)
};

// Short dual sum approximating S2(a/q + beta; X, X+H):
//   (q|beta|)^-1 sum_{n in [(q beta)^2 X, (q beta)^2 (X+H))}
//     d2(n) e((-abar/q - 1/(q^2 beta)) n)
// The reflected range is taken half-open. Negative beta evaluates the
// mirrored twist at |beta| and conjugates, matching S2(-alpha) = conj S2.
// Requires 0 < |beta| < 1/q^2; the table must cover the reflected range.
ReflectionResult reflected_short_sum(int64_t a, int64_t q, double beta,
                                     int64_t X, int64_t H,
                                     const SieveTable& d2);

// int_1^X |S2(a/q; x) - x divisor_mean(q, x)|^2 dx. The integrand is smooth
// on each [n, n+1) where the partial sum is constant, so every piece gets
// one 8-point Gauss-Legendre panel. The table must cover [1, X].
double error_second_moment(int64_t a, int64_t q, int64_t X,
                           const SieveTable& d2);

// moment_c * q * X^(3/2).
double error_second_moment_prediction(int64_t q, int64_t X);

}  // namespace mdd
