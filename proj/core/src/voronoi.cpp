#include "mdd/voronoi.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "mdd/quadrature.hpp"

namespace mdd {

namespace {

constexpr double kPi = std::numbers::pi;

void require_coprime(int64_t a, int64_t q, const char* who) {
  if (q < 1) throw domain_error(std::string(who) + ": q must be >= 1");
  const int64_t r = ((a % q) + q) % q;
  if (std::gcd(r == 0 ? q : r, q) != 1)
    throw domain_error(std::string(who) + ": a and q must be coprime");
}

}  // namespace

const VoronoiConstants& VoronoiConstants::get() {
  static const VoronoiConstants c = [] {
    VoronoiConstants v;
    v.moment_c =
        std::pow(v.zeta32, 4.0) / (6.0 * kPi * kPi * v.zeta3);
    if (!(v.moment_c > 0.654 && v.moment_c < 0.655))
      throw numeric_guard_error("moment constant outside (0.654, 0.655)");
    return v;
  }();
  return c;
}

double divisor_mean(int64_t q, double x) {
  if (q < 1) throw domain_error("divisor_mean: q must be >= 1");
  if (!(x > 0.0)) throw domain_error("divisor_mean: x must be positive");
  const double g2 = 2.0 * VoronoiConstants::get().gamma;
  return (std::log(x) + g2 - 1.0 - 2.0 * std::log((double)q)) / (double)q;
}

double divisor_density(int64_t q, double x) {
  if (q < 1) throw domain_error("divisor_density: q must be >= 1");
  if (!(x > 0.0)) throw domain_error("divisor_density: x must be positive");
  const double g2 = 2.0 * VoronoiConstants::get().gamma;
  return (std::log(x) + g2 - 2.0 * std::log((double)q)) / (double)q;
}

cplx divisor_exp_sum_rational(int64_t a, int64_t q, int64_t x,
                              const CumulativeDivisor& cum,
                              ResidueSumCache* cache) {
  require_coprime(a, q, "divisor_exp_sum_rational");
  if (x < 1 || x > cum.up_to)
    throw domain_error("divisor_exp_sum_rational: x outside cumulative table");
  if (q == 1) return {(double)cum.sum_to(x), 0.0};

  const ResidueSumCache* src = nullptr;
  ResidueSumCache local;
  if (cache && cache->q == q && cache->x == x && !cache->sums.empty()) {
    src = cache;
  } else {
    local.q = q;
    local.x = x;
    local.sums.assign((size_t)q, 0);
    for (int64_t n = 1; n <= x; ++n)
      local.sums[(size_t)(n % q)] += cum.sum_to(n) - cum.sum_to(n - 1);
    if (cache) *cache = local;
    src = cache ? cache : &local;
  }

  const int64_t ar = ((a % q) + q) % q;
  KahanComplex acc;
  for (int64_t r = 0; r < q; ++r) {
    const double w = (double)src->sums[(size_t)r];
    if (w != 0.0) acc.add(w * unit_exp((double)((ar * r) % q) / (double)q));
  }
  return acc.value();
}

cplx twisted_error_exact(int64_t a, int64_t q, double x,
                         const CumulativeDivisor& cum,
                         ResidueSumCache* cache) {
  if (!(x >= 1.0)) throw domain_error("twisted_error_exact: x must be >= 1");
  const auto xi = (int64_t)std::floor(x);
  const cplx s = divisor_exp_sum_rational(a, q, xi, cum, cache);
  return s - cplx(x * divisor_mean(q, x), 0.0);
}

cplx twisted_error_series(int64_t a, int64_t q, double x, int64_t N,
                          const SieveTable& d2) {
  require_coprime(a, q, "twisted_error_series");
  if (N < 1) throw domain_error("twisted_error_series: N must be >= 1");
  if (!(x > 0.0)) throw domain_error("twisted_error_series: x must be positive");
  if (!d2.covers(1, N))
    throw domain_error("twisted_error_series: table does not cover [1, N]");

  const int64_t abar = (q == 1) ? 0 : mod_inverse(a, q);
  const double coef =
      std::sqrt((double)q) * std::pow(x, 0.25) / (kPi * std::sqrt(2.0));
  KahanComplex acc;
  for (int64_t n = 1; n <= N; ++n) {
    const double osc =
        std::cos(4.0 * kPi * std::sqrt((double)n * x) / (double)q - kPi / 4.0);
    const double amp =
        (double)d2.values[(size_t)(n - d2.lo)] * std::pow((double)n, -0.75) * osc;
    // e(-n abar / q) = conj of the rational phase
    const cplx tw = std::conj(unit_exp((double)((abar * (n % q)) % q) / (double)q));
    acc.add(amp * tw);
  }
  return coef * acc.value();
}

double boundary_main_term(int64_t q, int64_t X, int64_t H) {
  if (X < 1 || H < 0) throw domain_error("boundary_main_term: bad interval");
  const double x1 = (double)checked_add(X, H);
  return x1 * divisor_mean(q, x1) - (double)X * divisor_mean(q, (double)X);
}

ReflectionResult reflected_short_sum(int64_t a, int64_t q, double beta,
                                     int64_t X, int64_t H,
                                     const SieveTable& d2) {
  require_coprime(a, q, "reflected_short_sum");
  if (beta == 0.0) throw domain_error("reflected_short_sum: beta must be nonzero");
  if (std::fabs(beta) >= 1.0 / (double)checked_mul(q, q))
    throw domain_error("reflected_short_sum: need 0 < |beta| < 1/q^2");
  if (X < 1 || H < 0) throw domain_error("reflected_short_sum: bad interval");
  if ((double)q > std::sqrt((double)X))
    throw domain_error("reflected_short_sum: need q <= sqrt(X)");

  if (beta < 0.0) {
    const int64_t am = ((a % q) + q) % q;
    ReflectionResult r = reflected_short_sum((q - am) % q == 0 ? q : q - am, q,
                                             -beta, X, H, d2);
    r.value = std::conj(r.value);
    return r;
  }

  ReflectionResult out;
  out.outside_regime = (double)q * beta < 0.1 / std::sqrt((double)X);

  const double qb = (double)q * beta;
  const double lo = qb * qb * (double)X;
  const double hi = qb * qb * (double)(X + H);
  int64_t n0 = (int64_t)std::ceil(lo);
  if (n0 < 1) n0 = 1;
  const int64_t n1 = (int64_t)std::ceil(hi) - 1;  // [lo, hi)
  if (n1 < n0) {
    out.degenerate = true;
    return out;
  }
  if (!d2.covers(n0, n1))
    throw domain_error("reflected_short_sum: table misses reflected range");

  const int64_t abar = (q == 1) ? 0 : mod_inverse(a, q);
  const double c = 1.0 / ((double)q * (double)q * beta);
  const double cf = c - std::floor(c);
  KahanComplex acc;
  for (int64_t n = n0; n <= n1; ++n) {
    double t = (double)((abar * (n % q)) % q) / (double)q + frac_mul(cf, n);
    if (t >= 1.0) t -= 1.0;
    acc.add((double)d2.values[(size_t)(n - d2.lo)] * std::conj(unit_exp(t)));
  }
  out.value = acc.value() / qb;
  return out;
}

double error_second_moment(int64_t a, int64_t q, int64_t X,
                           const SieveTable& d2) {
  require_coprime(a, q, "error_second_moment");
  if (X < 1) throw domain_error("error_second_moment: X must be >= 1");
  if (q > X) throw domain_error("error_second_moment: need q <= X");
  if (X > 1 && !d2.covers(1, X - 1))
    throw domain_error("error_second_moment: table does not cover [1, X)");

  const int64_t ar = ((a % q) + q) % q;
  std::vector<cplx> phase((size_t)q);
  for (int64_t r = 0; r < q; ++r)
    phase[(size_t)r] = unit_exp((double)((ar * r) % q) / (double)q);

  const GaussLegendre8& rule = gl8();
  const double g2m1 = 2.0 * VoronoiConstants::get().gamma - 1.0;
  const double lq2 = 2.0 * std::log((double)q);
  KahanComplex partial;  // S2(a/q; n), updated term by term
  KahanSum<double> total;
  for (int64_t n = 1; n < X; ++n) {
    partial.add((double)d2.values[(size_t)(n - d2.lo)] * phase[(size_t)(n % q)]);
    const cplx A = partial.value();
    // one panel of |A - x divisor_mean(q, x)|^2 over [n, n+1]
    const double mid = (double)n + 0.5;
    double piece = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double x = mid + 0.5 * rule.node[i];
      const double main = x * (std::log(x) + g2m1 - lq2) / (double)q;
      const double re = A.real() - main;
      piece += 0.5 * rule.weight[i] * (re * re + A.imag() * A.imag());
    }
    total.add(piece);
  }
  return total.value();
}

double error_second_moment_prediction(int64_t q, int64_t X) {
  if (q < 1) throw domain_error("error_second_moment_prediction: q >= 1");
  if (X < 0) throw domain_error("error_second_moment_prediction: X >= 0");
  return VoronoiConstants::get().moment_c * (double)q *
         std::pow((double)X, 1.5);
}

}  // namespace mdd
