#include "mdd/expsum.hpp"
#include <array>

#include <cmath>
#include <vector>

namespace mdd {

namespace {

// sum_{d in [0, g) \ {b}} e(t d) via the phase recurrence; g is small.
cplx digit_factor(int64_t g, int64_t b, double t) {
  const cplx w = unit_exp(t);
  cplx z = 1.0;
  KahanComplex acc;
  for (int64_t d = 0; d < g; ++d) {
    if (d != b) acc.add(z);
    z *= w;
  }
  return acc.value();
}

// Digit factors for positions 0..count-1 at frequency alpha; the level-j
// factor sees frac(alpha g^j), and frac(g * frac(x)) == frac(g x) keeps the
// chain exact up to one rounding per level.
std::vector<cplx> digit_factors(const DigitSet& ds, double alpha,
                                int64_t count) {
  std::vector<cplx> f((size_t)count);
  double t = alpha;
  for (int64_t j = 0; j < count; ++j) {
    f[(size_t)j] = digit_factor(ds.base(), ds.excluded(), t);
    t = reduce_mod1(t * (double)ds.base());
  }
  return f;
}

}  // namespace

cplx divisor_exp_sum(double alpha, int64_t X, int64_t H,
                     const SieveTable& table) {
  if (X < 1 || H < 0) throw domain_error("divisor_exp_sum: bad interval");
  const int64_t end = checked_add(X, H);
  if (!table.covers(X, end))
    throw domain_error("divisor_exp_sum: table does not cover [X, X+H]");
  alpha = reduce_mod1(alpha);

  const cplx step = unit_exp(alpha);
  const int64_t base_idx = X - table.lo;
  KahanComplex acc;
  cplx z = 0.0;
  for (int64_t i = 0; i <= H; ++i) {
    if ((i & 1023) == 0) z = unit_exp(frac_mul(alpha, X + i));
    acc.add((double)table.values[(size_t)(base_idx + i)] * z);
    z *= step;
  }
  return acc.value();
}

cplx digit_exp_sum_direct(const DigitSet& ds, double alpha, int64_t lo,
                          int64_t hi) {
  const double a = reduce_mod1(alpha);
  // Phases advance over the ascending members by tabulated small-gap
  // multipliers, re-anchored to an exact exponential every 256 terms or at
  // any gap beyond the table.
  constexpr int kGapTable = 64;
  constexpr int kAnchorEvery = 256;
  std::array<cplx, kGapTable + 1> gap;
  gap[0] = 1.0;
  gap[1] = unit_exp(a);
  for (int d = 2; d <= kGapTable; ++d) gap[(size_t)d] = gap[(size_t)(d - 1)] * gap[1];

  KahanComplex acc;
  cplx z = 0.0;
  int64_t prev = -1;
  int since_anchor = kAnchorEvery;
  ds.for_each(lo, hi, [&](int64_t n) {
    const int64_t d = n - prev;
    if (since_anchor >= kAnchorEvery || d > kGapTable) {
      z = unit_exp(frac_mul(a, n));
      since_anchor = 0;
    } else {
      z *= gap[(size_t)d];
      ++since_anchor;
    }
    prev = n;
    acc.add(z);
  });
  return acc.value();
}

cplx digit_exp_sum_block(const DigitSet& ds, double alpha, int64_t k) {
  if (k < 0) throw domain_error("digit_exp_sum_block: k must be >= 0");
  checked_pow(ds.base(), k);  // overflow guard on the block size
  const std::vector<cplx> f = digit_factors(ds, reduce_mod1(alpha), k);
  cplx prod = 1.0;
  for (const cplx& v : f) prod *= v;
  return prod;
}

cplx digit_exp_sum_prefix(const DigitSet& ds, double alpha, int64_t H) {
  if (H < 1) throw domain_error("digit_exp_sum_prefix: H must be >= 1");
  const int64_t g = ds.base();
  const int64_t b = ds.excluded();
  const double a = reduce_mod1(alpha);

  std::vector<int64_t> pw{1};
  while (pw.back() <= H / g) pw.push_back(pw.back() * g);
  const int L = (int)pw.size();  // number of digits of H

  const std::vector<cplx> factors = digit_factors(ds, a, L);
  std::vector<cplx> block_prod((size_t)L + 1);
  block_prod[0] = 1.0;
  for (int j = 0; j < L; ++j) block_prod[(size_t)j + 1] = block_prod[(size_t)j] * factors[(size_t)j];

  // [0, H] splits into, per position i, the blocks whose digit at i is
  // below H's (higher digits matching H), plus H itself.
  KahanComplex acc;
  bool prefix_ok = true;
  for (int i = L - 1; i >= 0 && prefix_ok; --i) {
    const int64_t gi = pw[(size_t)i];
    const int64_t di = (H / gi) % g;
    const int64_t base_val = H - H % checked_mul(gi, g);
    for (int64_t c = 0; c < di; ++c) {
      if (c == b) continue;
      acc.add(unit_exp(frac_mul(a, base_val + c * gi)) * block_prod[(size_t)i]);
    }
    if (di == b) prefix_ok = false;
  }
  if (prefix_ok) acc.add(unit_exp(frac_mul(a, H)));
  acc.add(cplx(-1.0, 0.0));  // drop the n = 0 member of the c = 0 block
  return acc.value();
}

double normalized_fourier(const DigitSet& ds, double alpha, int64_t X,
                          int64_t H) {
  if (H < 1) throw domain_error("normalized_fourier: H must be >= 1");
  const bool shift_ok =
      X == 0 || (H < X && power_exponent(ds.base(), X) >= 0);
  if (shift_ok) {
    const int64_t size = ds.count_prefix(H);
    if (size == 0) throw domain_error("normalized_fourier: empty digit set");
    return std::abs(digit_exp_sum_prefix(ds, alpha, H)) / (double)size;
  }
  int64_t size = 0;
  const double a = reduce_mod1(alpha);
  KahanComplex acc;
  ds.for_each(X, checked_add(X, H), [&](int64_t n) {
    ++size;
    acc.add(unit_exp(frac_mul(a, n)));
  });
  if (size == 0) throw domain_error("normalized_fourier: empty digit set");
  return std::abs(acc.value()) / (double)size;
}

L1Report l1_norm_estimate(const DigitSet& ds, int64_t k, int64_t nodes_per_unit,
                          int threads) {
  if (k < 0) throw domain_error("l1_norm_estimate: k must be >= 0");
  const int64_t gk = checked_pow(ds.base(), k);
  if (nodes_per_unit < checked_mul(32, gk))
    throw domain_error("l1_norm_estimate: need >= 32 nodes per oscillation");

  const int64_t n_points = nodes_per_unit + 1;  // trapezoid endpoints
  const double inv = 1.0 / (double)nodes_per_unit;

  // |S_(0, g^k]| = |block - 1 + e(alpha g^k)|: the block covers [0, g^k),
  // drop n = 0, add n = g^k (a "1" digit followed by zeros, always allowed).
  auto magnitude = [&](double alpha) {
    const cplx s = digit_exp_sum_block(ds, alpha, k) - 1.0 +
                   unit_exp(frac_mul(alpha, gk));
    return std::abs(s);
  };

  const int64_t kChunk = 4096;
  std::vector<double> partial((size_t)chunk_count(n_points, kChunk), 0.0);
  for_chunks(n_points, kChunk, threads,
             [&](int64_t c, int64_t begin, int64_t end) {
               KahanSum<double> local;
               for (int64_t j = begin; j < end; ++j) {
                 const double w =
                     (j == 0 || j == nodes_per_unit) ? 0.5 : 1.0;
                 local.add(w * magnitude((double)j * inv));
               }
               partial[(size_t)c] = local.value();
             });
  KahanSum<double> total;
  for (double p : partial) total.add(p);

  L1Report rep;
  rep.nodes = nodes_per_unit;
  rep.integral = total.value() * inv;
  rep.set_size = ds.count_block(k);
  rep.decay_exponent = fourier_decay_exponent(ds.base());
  rep.reference = std::pow((double)rep.set_size, 1.0 - rep.decay_exponent);
  rep.ratio = rep.integral / rep.reference;
  return rep;
}

}  // namespace mdd
