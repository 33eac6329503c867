#include "mdd/circle.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "mdd/expsum.hpp"
#include "mdd/quadrature.hpp"
#include "mdd/voronoi.hpp"

namespace mdd {

namespace {

// 6.25 eight-node panels per oscillation period = 50 nodes per period.
constexpr double kPanelsPerPeriod = 6.25;
constexpr int64_t kMaxPanels = 12'500'000;  // 1e8 nodes

int64_t oscillation_panels(double periods) {
  const double p = std::ceil(periods * kPanelsPerPeriod);
  int64_t panels = p < 2.0 ? 2 : (int64_t)p;
  if (panels > kMaxPanels)
    throw numeric_guard_error("quadrature panel budget exceeded (1e8 nodes)");
  return panels;
}

double sinc(double z) {
  if (std::fabs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Continued-fraction convergents of alpha with denominator <= qmax,
// in increasing denominator order. Includes the floor(alpha)/1 start.
std::vector<RationalApprox> convergents(double alpha, int64_t qmax) {
  std::vector<RationalApprox> out;
  long double x = alpha;
  int64_t p_prev = 1, q_prev = 0;
  auto a0 = (int64_t)std::floor(x);
  int64_t p_cur = a0, q_cur = 1;
  out.push_back({p_cur, q_cur});
  x -= (long double)a0;
  for (int it = 0; it < 64; ++it) {
    if (x <= 0.0L) break;
    x = 1.0L / x;
    const long double t_ld = std::floor(x);
    if (t_ld > 9.0e17L) break;
    const auto t = (int64_t)t_ld;
    x -= t_ld;
    int64_t p_next = 0, q_next = 0;
    if (__builtin_mul_overflow(t, p_cur, &p_next) ||
        __builtin_add_overflow(p_next, p_prev, &p_next) ||
        __builtin_mul_overflow(t, q_cur, &q_next) ||
        __builtin_add_overflow(q_next, q_prev, &q_next))
      break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    if (q_cur > qmax) {
      // Semiconvergents p_prev' + t' p_prev over q_prev' + t' q_prev still
      // fit below qmax for t' < t; keep the largest.
      break;
    }
    out.push_back({p_cur, q_cur});
  }
  return out;
}

bool approx_ok(double alpha, int64_t a, int64_t q, int64_t Qbound) {
  return std::fabs(alpha - (double)a / (double)q) <=
         1.0 / ((double)q * (double)Qbound);
}

}  // namespace

ArcParams ArcParams::from_eta(int64_t X, double eta) {
  if (X < 2) throw domain_error("ArcParams: X must be >= 2");
  if (!(eta > 0.0) || eta >= 0.125)
    throw domain_error("ArcParams: eta must lie in (0, 1/8)");
  ArcParams p;
  p.X = X;
  p.eta = eta;
  p.P = (int64_t)std::floor(std::pow((double)X, 0.25 - eta));
  p.Q = (int64_t)std::floor(std::pow((double)X, 0.5 - 2.0 * eta));
  if (p.P < 1) throw domain_error("ArcParams: P < 1; X too small for eta");
  if (2 * p.P > p.Q)
    throw domain_error("ArcParams: 2P <= Q violated; arcs would overlap");
  if (std::llabs(p.Q - checked_mul(p.P, p.P)) > 2 * p.P)
    throw domain_error("ArcParams: |Q - P^2| > 2P; inconsistent dissection");
  return p;
}

ArcParams ArcParams::with_pq(int64_t X, int64_t P, int64_t Q, double eta) {
  if (X < 2) throw domain_error("ArcParams: X must be >= 2");
  if (P < 1 || Q < 1) throw domain_error("ArcParams: P, Q must be >= 1");
  ArcParams p;
  p.X = X;
  p.eta = eta;
  p.P = P;
  p.Q = Q;
  if (2 * p.P > p.Q)
    throw domain_error("ArcParams: 2P <= Q violated; arcs would overlap");
  if (std::llabs(p.Q - checked_mul(p.P, p.P)) > 2 * p.P)
    throw domain_error("ArcParams: |Q - P^2| > 2P; inconsistent dissection");
  return p;
}

RationalApprox dirichlet_approx(double alpha, int64_t Qbound) {
  if (Qbound < 1) throw domain_error("dirichlet_approx: Qbound must be >= 1");

  const std::vector<RationalApprox> conv = convergents(alpha, Qbound);
  const RationalApprox last = conv.back();
  if (approx_ok(alpha, last.a, last.q, Qbound)) return last;

  // Floating slack can leave the final convergent a hair outside the
  // inequality; try semiconvergents descending from the bound, then scan.
  if (conv.size() >= 2) {
    const RationalApprox& prev = conv[conv.size() - 2];
    const int64_t t_max = (Qbound - prev.q) / last.q;
    for (int64_t t = t_max; t >= 1; --t) {
      const int64_t a = prev.a + t * last.a;
      const int64_t q = prev.q + t * last.q;
      if (q <= Qbound && approx_ok(alpha, a, q, Qbound)) return {a, q};
    }
  }
  for (int64_t q = 1; q <= Qbound; ++q) {
    const auto a = (int64_t)std::llround(alpha * (double)q);
    const int64_t d = std::gcd(a == 0 ? q : std::llabs(a), q);
    if (approx_ok(alpha, a / d, q / d, Qbound)) return {a / d, q / d};
  }
  throw numeric_guard_error("dirichlet_approx: no admissible fraction found");
}

Classification classify(const ArcParams& params, double alpha) {
  alpha = reduce_mod1(alpha);
  // Any arc center with q <= P satisfies |alpha - a/q| < 1/(qQ) <= 1/(2q^2)
  // (using 2P <= Q), so it must appear among the convergents.
  for (const RationalApprox& c : convergents(alpha, params.P)) {
    if (c.q > params.P) continue;
    const double radius = 1.0 / ((double)c.q * (double)params.Q);
    if (std::fabs(alpha - (double)c.a / (double)c.q) < radius)
      return {true, Arc{c.a, c.q, radius}};
  }
  return {false, Arc{}};
}

cplx major_arc_integral(int64_t q, double beta, int64_t X, int64_t H) {
  if (q < 1) throw domain_error("major_arc_integral: q must be >= 1");
  if (X < 1 || H < 0) throw domain_error("major_arc_integral: bad interval");
  if (std::fabs(beta) > 1.0)
    throw domain_error("major_arc_integral: |beta| must be <= 1");
  if (beta == 0.0) return {boundary_main_term(q, X, H), 0.0};

  const int64_t panels = oscillation_panels(std::fabs(beta) * (double)H);
  // e(beta x) = e(beta X) e(beta u), u = x - X: the integer anchor keeps
  // the phase exact, the remainder beta*u stays small.
  const cplx anchor = unit_exp(frac_mul(reduce_mod1(beta), X));
  const cplx integral = gl8_composite(0.0, (double)H, panels, [&](double u) {
    return divisor_density(q, (double)X + u) * unit_exp(reduce_mod1(beta * u));
  });
  return anchor * integral;
}

double sine_kernel_term(int64_t q, int64_t n, int64_t X, int64_t H, double T) {
  if (!(T > 0.0)) throw domain_error("sine_kernel_term: T must be positive");
  if (q < 1 || X < 1 || H < 0) throw domain_error("sine_kernel_term: bad args");

  auto f = [&](double x) {
    return divisor_density(q, x) * 2.0 * T * sinc(kTwoPi * T * (x - (double)n));
  };
  auto piece = [&](double a, double b) {
    if (b <= a) return 0.0;
    return gl8_composite(a, b, oscillation_panels(T * (b - a)), f);
  };

  const auto x0 = (double)X;
  const auto x1 = (double)checked_add(X, H);
  if ((double)n > x0 && (double)n < x1)
    return piece(x0, (double)n) + piece((double)n, x1);
  return piece(x0, x1);
}

MainTermResult major_arc_main_term(const DigitSet& ds, int64_t X, int64_t H,
                                   const ArcParams& params, MainTermForm form,
                                   int64_t node_budget) {
  if (X < 1 || H < 0) throw domain_error("major_arc_main_term: bad interval");
  const std::vector<int64_t> members = ds.enumerate(X, checked_add(X, H));
  MainTermResult res;
  res.set_size = (int64_t)members.size();
  if (members.empty()) return res;

  if (form == MainTermForm::SineKernel) {
    KahanSum<double> acc;
    for (int64_t q = 1; q <= params.P; ++q) {
      const double T = 1.0 / (double)checked_mul(q, params.Q);
      std::vector<int64_t> cq((size_t)q);
      for (int64_t r = 0; r < q; ++r) cq[(size_t)r] = ramanujan_sum(q, r);
      for (int64_t n : members) {
        const int64_t c = cq[(size_t)(n % q)];
        if (c == 0) continue;
        acc.add((double)c * sine_kernel_term(q, n, X, H, T));
      }
    }
    res.value = acc.value();
    res.imag_residue = 0.0;
    return res;
  }

  // Direct beta quadrature. The integrand
  //   G(beta) = [int divisor_density e(beta x) dx] [sum_n c_q(n) e(-n beta)]
  // carries only difference frequencies |x - n| <= H, so panels follow H.
  int64_t est_nodes = 0;
  for (int64_t q = 1; q <= params.P; ++q) {
    const double T = 1.0 / (double)checked_mul(q, params.Q);
    const auto outer = (int64_t)std::ceil(2.0 * T * (double)H * kPanelsPerPeriod) + 2;
    const auto inner = (int64_t)std::ceil(T * (double)H * kPanelsPerPeriod) + 2;
    est_nodes += outer * 8 * (inner * 8 + (int64_t)members.size());
  }
  if (est_nodes > node_budget)
    throw numeric_guard_error(
        "major_arc_main_term: beta quadrature exceeds node budget");

  std::complex<long double> total{};
  for (int64_t q = 1; q <= params.P; ++q) {
    const double T = 1.0 / (double)checked_mul(q, params.Q);
    std::vector<int64_t> cq((size_t)q);
    for (int64_t r = 0; r < q; ++r) cq[(size_t)r] = ramanujan_sum(q, r);

    auto set_factor = [&](double beta) {
      const double nb = reduce_mod1(-beta);
      KahanComplex k;
      for (int64_t n : members) {
        const int64_t c = cq[(size_t)(n % q)];
        if (c == 0) continue;
        k.add((double)c * unit_exp(frac_mul(nb, n)));
      }
      return k.value();
    };
    const int64_t panels = oscillation_panels(2.0 * T * (double)H);
    total += (std::complex<long double>)gl8_composite(
        -T, T, panels, [&](double beta) {
          return major_arc_integral(q, beta, X, H) * set_factor(beta);
        });
  }
  res.value = (double)total.real();
  const double mag = std::max(std::fabs(res.value), 1e-300);
  res.imag_residue = std::fabs((double)total.imag()) / mag;
  return res;
}

double major_arc_error_ratio(int64_t a, int64_t q, double beta, int64_t X,
                             int64_t H, const SieveTable& d2, double eps) {
  if (q < 1) throw domain_error("major_arc_error_ratio: q must be >= 1");
  if (std::gcd(((a % q) + q) % q == 0 ? q : ((a % q) + q) % q, q) != 1)
    throw domain_error("major_arc_error_ratio: a, q must be coprime");
  const double alpha = (double)a / (double)q + beta;
  const cplx s = divisor_exp_sum(alpha, X, H, d2);
  const cplx main = major_arc_integral(q, beta, X, H);
  const double lx = std::log((double)X);
  const double bound = (double)q * std::pow((double)X, eps) +
                       std::sqrt((double)q) * (double)H /
                           std::sqrt((double)X) * lx * lx +
                       std::fabs(beta) * std::pow((double)q, 0.75) *
                           std::pow((double)X, 0.625) * std::sqrt((double)H);
  return std::abs(s - main) / bound;
}

MinorScanReport minor_arc_scan(int64_t X, int64_t H, const ArcParams& params,
                               int64_t grid_nodes, const SieveTable& d2,
                               int threads) {
  if (grid_nodes < 10'000)
    throw domain_error("minor_arc_scan: need grid_nodes >= 1e4");
  if (!d2.covers(X, checked_add(X, H)))
    throw domain_error("minor_arc_scan: table does not cover [X, X+H]");

  struct Cell {
    int64_t count = 0;
    double max_abs = -1.0;
    PhasePoint peak;
  };
  const int64_t kChunk = 512;
  std::vector<Cell> cells((size_t)chunk_count(grid_nodes, kChunk));
  for_chunks(grid_nodes, kChunk, threads,
             [&](int64_t c, int64_t begin, int64_t end) {
               Cell cell;
               for (int64_t j = begin; j < end; ++j) {
                 const double alpha = (double)j / (double)grid_nodes;
                 if (classify(params, alpha).major) continue;
                 ++cell.count;
                 const cplx v = divisor_exp_sum(alpha, X, H, d2);
                 if (std::abs(v) > cell.max_abs) {
                   cell.max_abs = std::abs(v);
                   cell.peak = {alpha, v};
                 }
               }
               cells[(size_t)c] = cell;
             });

  MinorScanReport rep;
  rep.grid_nodes = grid_nodes;
  for (const Cell& cell : cells) {
    rep.minor_count += cell.count;
    if (cell.count > 0 && cell.max_abs > rep.max_abs) {
      rep.max_abs = cell.max_abs;
      rep.peak = cell.peak;
    }
  }
  rep.all_major = rep.minor_count == 0;
  if (rep.all_major) {
    rep.max_abs = 0.0;
    rep.ratio = 0.0;
  } else {
    rep.ratio = rep.max_abs / (std::sqrt((double)X) * std::log((double)X));
  }
  return rep;
}

}  // namespace mdd
