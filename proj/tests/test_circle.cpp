#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "mdd/circle.hpp"
#include "mdd/expsum.hpp"
#include "mdd/quadrature.hpp"
#include "mdd/voronoi.hpp"
#include "oracles.hpp"

using namespace mdd;

namespace {

// brute-force arc membership: scan every q <= P around the nearest a
struct BruteArc {
  bool major = false;
  int64_t a = 0, q = 0;
};

BruteArc brute_classify(const ArcParams& p, double alpha) {
  for (int64_t q = 1; q <= p.P; ++q) {
    const auto a = (int64_t)std::llround(alpha * (double)q);
    if (std::gcd(a == 0 ? q : std::llabs(a), q) != 1) continue;
    if (std::fabs(alpha - (double)a / (double)q) <
        1.0 / ((double)q * (double)p.Q))
      return {true, a, q};
  }
  return {};
}

}  // namespace

TEST_CASE("arc parameter construction") {
  const ArcParams p = ArcParams::from_eta(1'000'000, 0.02);
  CHECK(p.P == 23);
  CHECK(p.Q == 575);
  CHECK(p.Q >= p.P * p.P - 1);          // flooring slack only
  CHECK(std::llabs(p.Q - p.P * p.P) <= 2 * p.P);
  CHECK(2 * p.P <= p.Q);

  CHECK_NOTHROW(ArcParams::with_pq(100, 3, 9));
  CHECK_THROWS_AS(ArcParams::with_pq(100, 5, 9), domain_error);
  CHECK_THROWS_AS(ArcParams::from_eta(4, 0.02), domain_error);
  CHECK_THROWS_AS(ArcParams::from_eta(1'000'000, 0.0), domain_error);
}

TEST_CASE("dirichlet approximation spot values") {
  const RationalApprox r1 = dirichlet_approx(1.0 / 3.0, 10);
  CHECK(r1.a == 1);
  CHECK(r1.q == 3);

  // 1/7 misses the inequality at this bound; the next admissible
  // convergent is 16/113 (verified against the exhaustive scan)
  const RationalApprox r2 = dirichlet_approx(0.1415926535, 120);
  CHECK(r2.a == 16);
  CHECK(r2.q == 113);

  const RationalApprox r3 = dirichlet_approx(1e-9, 50);
  CHECK(r3.a == 0);
  CHECK(r3.q == 1);

  const RationalApprox r4 = dirichlet_approx(0.9999, 8);
  CHECK(r4.a == 1);
  CHECK(r4.q == 1);
}

TEST_CASE("dirichlet approximation always satisfies its inequality") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int64_t> qb(1, 200);
  for (int rep = 0; rep < 1000; ++rep) {
    const double alpha = uni(rng);
    const int64_t bound = qb(rng);
    const RationalApprox r = dirichlet_approx(alpha, bound);
    REQUIRE(r.q >= 1);
    REQUIRE(r.q <= bound);
    REQUIRE(std::gcd(r.a == 0 ? r.q : std::llabs(r.a), r.q) == 1);
    REQUIRE(std::fabs(alpha - (double)r.a / (double)r.q) <=
            1.0 / ((double)r.q * (double)bound) + 1e-15);
  }
}

TEST_CASE("classification spot values") {
  const ArcParams p = ArcParams::from_eta(1'000'000, 0.02);
  const Classification c0 = classify(p, 0.0);
  CHECK(c0.major);
  CHECK(c0.arc.q == 1);

  const double off = 0.5 + 2.0 / (double)p.Q;
  CHECK_FALSE(classify(p, off).major);
}

TEST_CASE("classification agrees with the brute-force arc scan") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const ArcParams& p : {ArcParams::from_eta(1'000'000, 0.02),
                             ArcParams::from_eta(10'000, 0.02)}) {
    int majors = 0;
    for (int rep = 0; rep < 600; ++rep) {
      const double alpha = uni(rng);
      const Classification mine = classify(p, alpha);
      const BruteArc brute = brute_classify(p, alpha);
      REQUIRE(mine.major == brute.major);
      if (mine.major) {
        ++majors;
        REQUIRE(mine.arc.a == brute.a);
        REQUIRE(mine.arc.q == brute.q);
        REQUIRE(std::fabs(alpha - (double)mine.arc.a / (double)mine.arc.q) <
                mine.arc.radius);
      }
    }
    CHECK(majors > 0);
  }
}

TEST_CASE("major arcs are pairwise disjoint") {
  for (const ArcParams& p : {ArcParams::from_eta(10'000, 0.02),
                             ArcParams::from_eta(1'000'000, 0.02)}) {
    struct Span {
      double lo, hi;
    };
    std::vector<Span> arcs;
    for (int64_t q = 1; q <= p.P; ++q)
      for (int64_t a = 0; a <= q; ++a) {
        if (std::gcd(a == 0 ? q : a, q) != 1) continue;
        const double c = (double)a / (double)q;
        const double r = 1.0 / ((double)q * (double)p.Q);
        arcs.push_back({c - r, c + r});
      }
    for (size_t i = 0; i < arcs.size(); ++i)
      for (size_t j = i + 1; j < arcs.size(); ++j) {
        const bool overlap =
            arcs[i].lo < arcs[j].hi && arcs[j].lo < arcs[i].hi;
        REQUIRE_FALSE(overlap);
      }
  }
}

TEST_CASE("major arc integral") {
  // beta = 0 returns the closed boundary form
  CHECK(major_arc_integral(5, 0.0, 1000, 100).real() ==
        doctest::Approx(boundary_main_term(5, 1000, 100)).epsilon(1e-14));
  CHECK(major_arc_integral(5, 0.0, 1000, 100).imag() == 0.0);

  // grid refinement: the panel rule already resolves the oscillation, so a
  // 10x denser manual quadrature moves the value by < 1e-9 relative
  const int64_t X = 1'000'000, H = 1000;
  const double beta = 1e-6;
  const cplx v = major_arc_integral(1, beta, X, H);
  const cplx fine =
      unit_exp(frac_mul(beta, X)) *
      gl8_composite(0.0, (double)H, 200, [&](double u) {
        return divisor_density(1, (double)X + u) * unit_exp(reduce_mod1(beta * u));
      });
  CHECK(std::abs(v - fine) <= 1e-9 * std::abs(fine));

  // |result| <= H * max of the density over the interval
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> betas(-0.9, 0.9);
  for (int rep = 0; rep < 20; ++rep) {
    const double b = betas(rng);
    const double cap = (double)H * divisor_density(1, (double)(X + H));
    CHECK(std::abs(major_arc_integral(1, b, X, H)) <= cap * (1.0 + 1e-12));
  }
}

TEST_CASE("sine kernel term") {
  // T -> 0: integrand collapses like 2T * density
  const double tiny = sine_kernel_term(1, 110, 100, 20, 1e-9);
  CHECK(std::fabs(tiny) < 2e-9 * 20 * divisor_density(1, 120.0));

  // matches the beta integral of e(-n beta) major_arc_integral over |beta|<T
  for (int64_t q = 1; q <= 3; ++q) {
    const double T = 1.0 / ((double)q * 9.0);
    for (int64_t n : {95, 101, 105, 110, 120, 130}) {
      const double kernel = sine_kernel_term(q, n, 100, 20, T);
      const cplx beta_form =
          gl8_composite(-T, T, 400, [&](double beta) {
            return major_arc_integral(q, beta, 100, 20) *
                   unit_exp(reduce_mod1(-beta * (double)n));
          });
      REQUIRE(kernel ==
              doctest::Approx(beta_form.real()).epsilon(1e-6).scale(1.0));
      REQUIRE(std::fabs(beta_form.imag()) < 1e-9);
    }
  }

  // n far outside the interval: kernel stays below the crude envelope
  const double far = sine_kernel_term(1, 100'000, 100, 20, 1.0 / 9.0);
  const double envelope = divisor_density(1, 120.0) * 20.0 /
                          (std::numbers::pi * (100'000.0 - 120.0));
  CHECK(std::fabs(far) <= envelope * 1.1);
}

TEST_CASE("main term forms agree on the small dissection") {
  const DigitSet ds(10, 7);
  const ArcParams p = ArcParams::with_pq(100, 3, 9);
  const MainTermResult sk =
      major_arc_main_term(ds, 100, 20, p, MainTermForm::SineKernel);
  const MainTermResult bq =
      major_arc_main_term(ds, 100, 20, p, MainTermForm::BetaQuadrature);
  CHECK(sk.set_size == 18);
  CHECK(bq.set_size == 18);
  CHECK(sk.imag_residue == 0.0);
  CHECK(bq.imag_residue < 1e-6);
  CHECK(std::fabs(sk.value - bq.value) <= 1e-6 * std::fabs(bq.value));
}

TEST_CASE("main term handles the empty set and the node budget") {
  const DigitSet ds(10, 7);
  // everything in (7000, 7010] leads with the excluded digit
  const ArcParams p = ArcParams::with_pq(7000, 4, 16);
  const MainTermResult empty =
      major_arc_main_term(ds, 7000, 10, p, MainTermForm::SineKernel);
  CHECK(empty.set_size == 0);
  CHECK(empty.value == 0.0);

  const ArcParams p2 = ArcParams::with_pq(100, 3, 9);
  CHECK_THROWS_AS(
      major_arc_main_term(ds, 100, 20, p2, MainTermForm::BetaQuadrature, 10),
      numeric_guard_error);
}

TEST_CASE("major arc pointwise error ratio stays finite and small") {
  const SieveTable d2 = sieve_divisor_count(1'000'000, 1'010'000);
  const double r0 = major_arc_error_ratio(0, 1, 0.0, 1'000'000, 10'000, d2);
  CHECK(r0 >= 0.0);
  CHECK(r0 < 50.0);
  CHECK_THROWS_AS(major_arc_error_ratio(2, 4, 0.0, 1'000'000, 100, d2),
                  domain_error);

  // beta grid inside each arc radius, q <= 5; the max over the sweep is
  // what the error scale is for, so it must stay O(1)
  const ArcParams p = ArcParams::from_eta(1'000'000, 0.02);
  double worst = 0.0;
  for (int64_t q = 1; q <= 5; ++q) {
    const double T = 1.0 / ((double)q * (double)p.Q);
    const int64_t a = q == 1 ? 0 : 1;
    for (int i = -3; i <= 3; ++i) {
      const double beta = T * (double)i / 3.5;
      if (beta == 0.0) continue;
      worst = std::max(
          worst, major_arc_error_ratio(a, q, beta, 1'000'000, 10'000, d2));
    }
  }
  CHECK(worst < 50.0);
  CHECK(worst > 0.0);
}

TEST_CASE("minor arc scan") {
  const SieveTable d2 = sieve_divisor_count(10'000, 11'000);
  const ArcParams p = ArcParams::from_eta(10'000, 0.02);

  CHECK_THROWS_AS(minor_arc_scan(10'000, 1000, p, 100, d2), domain_error);

  const MinorScanReport r1 = minor_arc_scan(10'000, 1000, p, 10'000, d2);
  CHECK_FALSE(r1.all_major);
  CHECK(r1.minor_count > 0);
  CHECK(r1.max_abs > 0.0);
  CHECK(r1.ratio == doctest::Approx(r1.max_abs / (std::sqrt(10'000.0) *
                                                  std::log(10'000.0))));

  // doubling the grid scans a superset of frequencies
  const MinorScanReport r2 = minor_arc_scan(10'000, 1000, p, 20'000, d2, 2);
  CHECK(r2.max_abs >= r1.max_abs);

  // a dissection whose arcs swallow every grid rational: empty report
  const ArcParams wide = ArcParams::with_pq(100'000'000, 10'000, 100'000'000);
  const MinorScanReport r3 = minor_arc_scan(10'000, 1000, wide, 10'000, d2);
  CHECK(r3.all_major);
  CHECK(r3.minor_count == 0);
  CHECK(r3.max_abs == 0.0);
}
