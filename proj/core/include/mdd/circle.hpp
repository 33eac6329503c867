#pragma once

#include <cstdint>

#include "mdd/common.hpp"
#include "mdd/digitset.hpp"
#include "mdd/expsum.hpp"
#include "mdd/ntheory.hpp"

namespace mdd {

// Farey dissection parameters: arcs of radius 1/(qQ) around rationals a/q
// with q <= P. 2P <= Q keeps distinct arcs disjoint; Q tracks P^2 up to
// integer flooring slack (|Q - P^2| <= 2P is enforced).
struct ArcParams {
  int64_t X = 0;
  double eta = 0.0;
  int64_t P = 0;
  int64_t Q = 0;

  // P = floor(X^(1/4 - eta)), Q = floor(X^(1/2 - 2 eta)).
  static ArcParams from_eta(int64_t X, double eta);
  // Explicit P, Q (small hand-built dissections); same invariants.
  static ArcParams with_pq(int64_t X, int64_t P, int64_t Q, double eta = 0.0);
};

struct Arc {
  int64_t a = 0;
  int64_t q = 1;
  double radius = 0.0;  // 1/(qQ)
};

struct RationalApprox {
  int64_t a = 0;
  int64_t q = 1;
};

// Coprime a/q with 1 <= q <= Qbound and |alpha - a/q| <= 1/(q Qbound).
// Found by continued-fraction convergents; semiconvergents and finally an
// exhaustive scan back the convergents up for borderline floating cases.
// a may be 0 or q when alpha sits near an integer.
RationalApprox dirichlet_approx(double alpha, int64_t Qbound);

struct Classification {
  bool major = false;
  Arc arc;  // meaningful when major
};

// Major iff some coprime a/q with q <= P has |alpha - a/q| < 1/(qQ).
// Any such center satisfies |alpha - a/q| < 1/(2q^2), hence is a
// continued-fraction convergent of alpha, so only convergents are tested.
Classification classify(const ArcParams& params, double alpha);

// int_X^{X+H} divisor_density(q, x) e(beta x) dx with >= 50 quadrature
// nodes per oscillation period 1/|beta|; at beta = 0, the closed boundary
// form (X+H) divisor_mean(X+H) - X divisor_mean(X).
cplx major_arc_integral(int64_t q, double beta, int64_t X, int64_t H);

// (1/pi) int_X^{X+H} divisor_density(q, x) / (x - n) sin(2 pi T (x - n)) dx
// through the removable form divisor_density * 2T * sinc(2 pi T (x - n));
// panels split at x = n. Equals the |beta| < T integral of
// e(-n beta) major_arc_integral(q, beta).
double sine_kernel_term(int64_t q, int64_t n, int64_t X, int64_t H, double T);

enum class MainTermForm { BetaQuadrature, SineKernel };

struct MainTermResult {
  double value = 0.0;
  double imag_residue = 0.0;  // |Im| / |value|; 0 for the kernel form
  int64_t set_size = 0;
};

// sum_{q <= P} int_{|beta| < 1/(qQ)} [int_X^{X+H} divisor_density e(beta x) dx]
//   * [sum_{n in set} c_q(n) e(-n beta)] d(beta),
// either by direct beta quadrature (oracle; rejected above node_budget) or
// collapsed through the sine kernel, one term per (q, n) with c_q(n) != 0.
MainTermResult major_arc_main_term(const DigitSet& ds, int64_t X, int64_t H,
                                   const ArcParams& params, MainTermForm form,
                                   int64_t node_budget = 100'000'000);

// |S2(a/q + beta; X, X+H) - major_arc_integral(q, beta, X, H)| divided by
// q X^eps + q^(1/2) H X^(-1/2) log^2 X + |beta| q^(3/4) X^(5/8) H^(1/2).
double major_arc_error_ratio(int64_t a, int64_t q, double beta, int64_t X,
                             int64_t H, const SieveTable& d2,
                             double eps = 0.05);

struct MinorScanReport {
  int64_t grid_nodes = 0;
  int64_t minor_count = 0;
  PhasePoint peak;     // minor frequency with the largest |S2|
  double max_abs = 0.0;
  double ratio = 0.0;  // max_abs / (sqrt(X) log X)
  bool all_major = false;
};

// |S2| on the uniform grid j/grid_nodes, minor-classified nodes only.
// Refining the grid to a multiple of grid_nodes scans a superset of points.
MinorScanReport minor_arc_scan(int64_t X, int64_t H, const ArcParams& params,
                               int64_t grid_nodes, const SieveTable& d2,
                               int threads = 1);

}  // namespace mdd
