// Acceptance suite: runs every quantitative gate at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.
//
// Usage: mdd_acceptance [--cli PATH]   (PATH to the mdd binary; criterion 13
// is the only one that shells out.)

#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mdd/circle.hpp"
#include "mdd/digitset.hpp"
#include "mdd/expsum.hpp"
#include "mdd/explab.hpp"
#include "mdd/ntheory.hpp"
#include "mdd/quadrature.hpp"
#include "mdd/voronoi.hpp"

using namespace mdd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %02d %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", index,
              name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void criterion(int index, const char* name,
               const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(index, name, pass,
         detail, std::chrono::duration<double>(Clock::now() - t0).count());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing:" + p.string() + ">";
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// 1. Ramanujan equivalence: closed form == defining sum, q,n <= 200
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c01_ramanujan() {
  for (int64_t q = 1; q <= 200; ++q)
    for (int64_t n = 0; n <= 200; ++n)
      if (ramanujan_sum(q, n) != ramanujan_sum_direct(q, n))
        return {false, "mismatch at q=" + std::to_string(q) +
                           " n=" + std::to_string(n)};
  return {true, "40200 pairs exact"};
}

// ---------------------------------------------------------------------------
// 2. Digit-product Fourier exactness: block product vs direct sum
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c02_block_product() {
  std::mt19937_64 rng(20260808);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  const std::pair<int64_t, int64_t> combos[] = {{10, 7}, {12, 7}, {12, 2}};
  for (const auto& [g, b] : combos) {
    const DigitSet ds(g, b);
    for (int rep = 0; rep < 1000; ++rep) {
      const double alpha = uni(rng);
      for (int64_t k = 0; k <= 5; ++k) {
        const cplx blk = digit_exp_sum_block(ds, alpha, k);
        const cplx dir =
            k == 0 ? cplx(1.0, 0.0)
                   : cplx(1.0, 0.0) + digit_exp_sum_direct(
                                          ds, alpha, 0, checked_pow(g, k) - 1);
        const double rel =
            std::abs(blk - dir) / std::pow((double)(g - 1), (double)k);
        worst = std::max(worst, rel);
        if (rel >= 1e-8)
          return {false, "g=" + std::to_string(g) + " b=" + std::to_string(b) +
                             " k=" + std::to_string(k) + " rel=" + fmt(rel)};
      }
    }
  }
  return {true, "worst scaled error " + fmt(worst) + " < 1e-8"};
}

// ---------------------------------------------------------------------------
// 3. Boundary identity: density quadrature vs closed form, 1e-12 relative
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c03_boundary() {
  double worst = 0.0;
  for (int64_t q : {1, 5, 17}) {
    const double closed = boundary_main_term(q, 1'000'000, 1000);
    const double quad = gl8_composite(
        1e6, 1e6 + 1000.0, 16, [&](double x) { return divisor_density(q, x); });
    worst = std::max(worst, std::fabs(quad - closed) / std::fabs(closed));
  }
  return {worst <= 1e-12, "worst relative " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 4. Main-term form equivalence on the hand dissection
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c04_forms() {
  const DigitSet ds(10, 7);
  const ArcParams p = ArcParams::with_pq(100, 3, 9);
  const MainTermResult sk =
      major_arc_main_term(ds, 100, 20, p, MainTermForm::SineKernel);
  const MainTermResult bq =
      major_arc_main_term(ds, 100, 20, p, MainTermForm::BetaQuadrature);
  const double rel = std::fabs(sk.value - bq.value) / std::fabs(bq.value);
  const bool pass = rel <= 1e-6 && bq.imag_residue < 1e-6;
  return {pass, "forms differ by " + fmt(rel) + ", imag residue " +
                    fmt(bq.imag_residue)};
}

// ---------------------------------------------------------------------------
// 5. Second-moment constant: ratio in [0.8, 1.2] at 1e6, closer than at 1e4
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c05_moment() {
  const SieveTable d2 = sieve_divisor_count(1, 999'999);
  const double r4 = error_second_moment(0, 1, 10'000, d2) /
                    error_second_moment_prediction(1, 10'000);
  const double r6 = error_second_moment(0, 1, 1'000'000, d2) /
                    error_second_moment_prediction(1, 1'000'000);
  const bool pass =
      r6 > 0.8 && r6 < 1.2 && std::fabs(r6 - 1.0) < std::fabs(r4 - 1.0);
  return {pass, "ratio(1e6)=" + fmt(r6) + " ratio(1e4)=" + fmt(r4)};
}

// ---------------------------------------------------------------------------
// 6. Boundary-formula error band over the rational sweep
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c06_boundary_band() {
  const SieveTable d2 = sieve_divisor_count(1'000'000, 1'010'000);
  double worst = 0.0;
  for (int64_t q = 1; q <= 20; ++q) {
    const int64_t a_hi = q == 1 ? 0 : q - 1;
    for (int64_t a = q == 1 ? 0 : 1; a <= a_hi; ++a) {
      if (q > 1 && std::gcd(a, q) != 1) continue;
      worst = std::max(
          worst, major_arc_error_ratio(a, q, 0.0, 1'000'000, 10'000, d2));
    }
  }
  return {worst < 50.0, "max normalized error " + fmt(worst) + " < 50"};
}

// ---------------------------------------------------------------------------
// 7. Reflection band: |S2 - reflected sum| / (sqrt(X) log X) < 10
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c07_reflection_band() {
  const SieveTable main_d2 = sieve_divisor_count(1'000'000, 1'010'000);
  const SieveTable dual_d2 = sieve_divisor_count(1, 200);
  const double sx = std::sqrt(1e6);
  const double scale = sx * std::log(1e6);
  double worst = 0.0;
  for (int64_t q = 1; q <= 3; ++q) {
    const int64_t a = q == 1 ? 0 : 1;
    for (int i = 0; i <= 20; ++i) {
      const double t = 1.0 + 9.0 * (double)i / 20.0;  // q|beta| in [1,10]/sqrt X
      const double beta = t / (sx * (double)q);
      const ReflectionResult refl =
          reflected_short_sum(a, q, beta, 1'000'000, 10'000, dual_d2);
      const cplx lhs = divisor_exp_sum((double)a / (double)q + beta, 1'000'000,
                                       10'000, main_d2);
      worst = std::max(worst, std::abs(lhs - refl.value) / scale);
    }
  }
  return {worst < 10.0, "max normalized gap " + fmt(worst) + " < 10"};
}

// ---------------------------------------------------------------------------
// 8. Hyperbola cross-check: exact zero difference
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c08_hyperbola() {
  const DigitSet ds(10, 7);
  for (int64_t X : {1000LL, 10'000LL, 100'000LL}) {
    const HyperbolaReport rep = hyperbola_crosscheck(ds, X);
    if (rep.difference != 0)
      return {false, "X=" + std::to_string(X) +
                         " diff=" + std::to_string(rep.difference)};
  }
  return {true, "difference exactly 0 at X=1e3,1e4,1e5"};
}

// ---------------------------------------------------------------------------
// 9. Divisor-sum ratios at X = 1e6, H = 1e3
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c09_ratios() {
  const DigitSet ds(10, 7);
  const DivisorRatioReport rep = divisor_sum_ratios(ds, 1'000'000, 1000);
  const bool pass =
      rep.r1 > 0.0 && rep.r1 < 1.0 && rep.r2 >= 0.1 && rep.r2 <= 10.0;
  return {pass, "R1=" + fmt(rep.r1) + " R2=" + fmt(rep.r2)};
}

// ---------------------------------------------------------------------------
// 10. Discrepancy summary ratio strictly decreases over X = 1e4, 1e5, 1e6
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c10_discrepancy_trend() {
  const DigitSet ds(10, 7);
  double prev = std::numeric_limits<double>::infinity();
  std::string seen;
  for (int k = 4; k <= 6; ++k) {
    const DiscrepancyReport rep =
        progression_discrepancy(ds, checked_pow(10, k), 50, true, false);
    seen += (seen.empty() ? "" : " > ") + fmt(rep.ratio);
    if (!(rep.ratio < prev)) return {false, "not decreasing: " + seen};
    prev = rep.ratio;
  }
  return {true, seen};
}

// ---------------------------------------------------------------------------
// 11. L1 ratio stability: ratio(k+1) <= 2 ratio(k) for k = 3, 4
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c11_l1_stability() {
  const DigitSet ds(10, 7);
  double prev = -1.0;
  std::string seen;
  for (int64_t k = 3; k <= 5; ++k) {
    const L1Report rep =
        l1_norm_estimate(ds, k, checked_mul(64, checked_pow(10, k)), 1);
    seen += (seen.empty() ? "" : ", ") + fmt(rep.ratio);
    if (prev > 0.0 && rep.ratio > 2.0 * prev)
      return {false, "ratio jumped: " + seen};
    prev = rep.ratio;
  }
  return {true, "ratios " + seen};
}

// ---------------------------------------------------------------------------
// 12. Arc machinery: classification vs brute force, Dirichlet inequality
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c12_arcs() {
  const ArcParams p = ArcParams::from_eta(1'000'000, 0.02);
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int64_t> bounds(1, 200);
  int majors = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const double alpha = uni(rng);
    const Classification mine = classify(p, alpha);
    bool bmajor = false;
    int64_t ba = 0, bq = 0;
    for (int64_t q = 1; q <= p.P && !bmajor; ++q) {
      const auto a = (int64_t)std::llround(alpha * (double)q);
      if (std::gcd(a == 0 ? q : a, q) != 1) continue;
      if (std::fabs(alpha - (double)a / (double)q) <
          1.0 / ((double)q * (double)p.Q)) {
        bmajor = true;
        ba = a;
        bq = q;
      }
    }
    if (mine.major != bmajor ||
        (mine.major && (mine.arc.a != ba || mine.arc.q != bq)))
      return {false, "classification mismatch at alpha=" + fmt(alpha)};
    if (mine.major) ++majors;

    const int64_t bound = bounds(rng);
    const RationalApprox r = dirichlet_approx(alpha, bound);
    if (r.q < 1 || r.q > bound ||
        std::gcd(r.a == 0 ? r.q : std::llabs(r.a), r.q) != 1 ||
        std::fabs(alpha - (double)r.a / (double)r.q) >
            1.0 / ((double)r.q * (double)bound) + 1e-15)
      return {false, "approximation contract broken at alpha=" + fmt(alpha)};
  }
  return {true, "1000 frequencies, " + std::to_string(majors) + " major"};
}

// ---------------------------------------------------------------------------
// 13. CLI determinism: identical manifests give byte-identical CSV,
//     including under multi-worker execution
// ---------------------------------------------------------------------------
std::pair<bool, std::string> c13_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path (pass --cli)"};

  const fs::path root = fs::temp_directory_path() / "mdd_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);

  const std::vector<std::pair<std::string, std::string>> runs = {
      {"divisor-sum", "--g 10 --b 7 --X 10000 --H 1000"},
      {"main-term", "--g 10 --b 7 --m 4 --H 100 --eta 0.02"},
      {"arcs", "--X 1000000 --samples 500 --seed 7"},
      {"voronoi-check", "--X 100000 --H 1000 --qmax 8 --threads 2"},
      {"moment", "--q 1 --X 20000"},
      {"discrepancy", "--X 100000 --qmax 30"},
      {"l1", "--g 10 --b 7 --k 3 --threads 2"},
      {"double-sum", "--g 10 --b 7 --X 10000 --H 1000"},
      {"hyperbola", "--g 10 --b 7 --X 10000"},
      {"minor-scan", "--X 10000 --H 1000 --grid 10000 --threads 2"},
  };

  auto shell = [&](const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
  };

  for (const auto& [sub, flags] : runs) {
    const fs::path d1 = root / (sub + "_1");
    const fs::path d2 = root / (sub + "_2");
    for (const fs::path& d : {d1, d2}) {
      const std::string cmd =
          cli + " " + sub + " " + flags + " --out " + d.string();
      if (shell(cmd) != 0) return {false, sub + ": nonzero exit"};
    }
    if (slurp(d1 / (sub + ".csv")) != slurp(d2 / (sub + ".csv")))
      return {false, sub + ": CSV bytes differ between reruns"};
  }

  // worker count must not move a single byte
  const fs::path t1 = root / "l1_t1";
  const fs::path t3 = root / "l1_t3";
  if (shell(cli + " l1 --k 3 --threads 1 --out " + t1.string()) != 0 ||
      shell(cli + " l1 --k 3 --threads 3 --out " + t3.string()) != 0)
    return {false, "l1 thread variation: nonzero exit"};
  if (slurp(t1 / "l1.csv") != slurp(t3 / "l1.csv"))
    return {false, "l1 CSV differs between thread counts"};

  fs::remove_all(root);
  return {true, "10 subcommands byte-identical, thread-count invariant"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--cli") == 0) cli = argv[i + 1];
  if (cli.empty())
    if (const char* env = std::getenv("MDD_CLI")) cli = env;

  criterion(1, "ramanujan-equivalence", c01_ramanujan);
  criterion(2, "digit-product-exactness", c02_block_product);
  criterion(3, "boundary-identity", c03_boundary);
  criterion(4, "main-term-form-equivalence", c04_forms);
  criterion(5, "second-moment-constant", c05_moment);
  criterion(6, "boundary-error-band", c06_boundary_band);
  criterion(7, "reflection-error-band", c07_reflection_band);
  criterion(8, "hyperbola-cross-check", c08_hyperbola);
  criterion(9, "divisor-sum-ratios", c09_ratios);
  criterion(10, "discrepancy-trend", c10_discrepancy_trend);
  criterion(11, "l1-ratio-stability", c11_l1_stability);
  criterion(12, "arc-machinery", c12_arcs);
  criterion(13, "cli-determinism", [&] { return c13_determinism(cli); });

  if (g_failures == 0)
    std::printf("all 13 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures;
}
