#pragma once

#include <cstdint>

#include "mdd/common.hpp"
#include "mdd/digitset.hpp"
#include "mdd/ntheory.hpp"

namespace mdd {

// One sample of an exponential sum on the frequency line.
struct PhasePoint {
  double alpha = 0.0;  // in [0, 1)
  cplx value{};
};

// sum_{n=X}^{X+H} d2(n) e(n alpha), phases advanced by one complex multiply
// per term and re-anchored to an exact exponential every 1024 terms so the
// recurrence drift stays below ~1e-9 relative out to 1e7 terms.
// The table must cover [X, X+H]. alpha is reduced mod 1.
cplx divisor_exp_sum(double alpha, int64_t X, int64_t H,
                     const SieveTable& table);

// sum of e(n alpha) over the digit-set members of (lo, hi], one exact
// exponential per member. Oracle for the block/prefix fast paths.
cplx digit_exp_sum_direct(const DigitSet& ds, double alpha, int64_t lo,
                          int64_t hi);

// Product over digit positions j < k of sum_{d != b} e(alpha d g^j).
// Equals the direct sum over the full block [0, g^k).
cplx digit_exp_sum_block(const DigitSet& ds, double alpha, int64_t k);

// Sum over (0, H] for arbitrary H, by splitting H's base-g prefix tree into
// O(g log_g H) full blocks, each given by the product formula.
cplx digit_exp_sum_prefix(const DigitSet& ds, double alpha, int64_t H);

// |S_(X,X+H]*(alpha)| / |set|. For X = g^m and H < X the shift identity
// S over (X, X+H] = e(alpha X) S over (0, H] makes the magnitude equal to
// the prefix sum's; X = 0 uses the prefix directly; anything else falls
// back to direct enumeration.
double normalized_fourier(const DigitSet& ds, double alpha, int64_t X,
                          int64_t H);

struct L1Report {
  double integral = 0.0;      // trapezoid estimate of int_0^1 |S| d(alpha)
  int64_t set_size = 0;       // |(0, g^k]*| = (g-1)^k
  double decay_exponent = 0;  // lambda(g)
  double reference = 0.0;     // set_size^(1 - lambda)
  double ratio = 0.0;         // integral / reference
  int64_t nodes = 0;
};

// Uniform trapezoid estimate of int_0^1 |S_(0, g^k]*(alpha)| d(alpha) with
// the block product formula per node. Rejects fewer than 32 nodes per
// oscillation of the fastest phase (nodes_per_unit < 32 g^k). Node work is
// chunked for workers; chunk partials fold in fixed order, so the result is
// bit-identical for any thread count.
L1Report l1_norm_estimate(const DigitSet& ds, int64_t k, int64_t nodes_per_unit,
                          int threads = 1);

}  // namespace mdd
