#include "mdd/digitset.hpp"

#include <cmath>

namespace mdd {

namespace {

// Powers g^0 .. g^L with g^L > hi (so the root block covers [0, hi]).
std::vector<int64_t> powers_covering(int64_t g, int64_t hi) {
  std::vector<int64_t> pw{1};
  while (pw.back() <= hi) pw.push_back(checked_mul(pw.back(), g));
  return pw;
}

struct Walker {
  int64_t g, b, lo, hi;
  const std::function<void(int64_t)>& fn;
  DigitSet::EnumStats* stats;
  const std::vector<int64_t>& pw;

  void walk(int64_t prefix, int level) const {
    const int64_t span = pw[(size_t)level];
    const int64_t node_lo = prefix * span;
    const int64_t node_hi = node_lo + (span - 1);
    if (node_lo > hi || node_hi <= lo) {
      if (stats) ++stats->nodes_pruned;
      return;
    }
    if (stats) ++stats->nodes_visited;
    if (level == 0) {
      fn(prefix);
      return;
    }
    for (int64_t d = 0; d < g; ++d) {
      if (d == b) continue;
      walk(prefix * g + d, level - 1);
    }
  }
};

}  // namespace

DigitSet::DigitSet(int64_t base, int64_t excluded)
    : base_(base), excluded_(excluded) {
  if (base < 3) throw domain_error("DigitSet: base must be >= 3");
  if (excluded < 2 || excluded > base - 1)
    throw domain_error("DigitSet: excluded digit must lie in {2, ..., g-1}");
}

bool DigitSet::contains(int64_t n) const {
  if (n < 0) throw domain_error("DigitSet::contains: n must be >= 0");
  while (n > 0) {
    if (n % base_ == excluded_) return false;
    n /= base_;
  }
  return true;
}

void DigitSet::for_each(int64_t lo, int64_t hi,
                        const std::function<void(int64_t)>& fn,
                        EnumStats* stats) const {
  if (lo < 0 || hi < lo) throw domain_error("DigitSet::for_each: bad range");
  if (hi == lo) return;
  const std::vector<int64_t> pw = powers_covering(base_, hi);
  Walker w{base_, excluded_, lo, hi, fn, stats, pw};
  w.walk(0, (int)pw.size() - 1);
}

std::vector<int64_t> DigitSet::enumerate(int64_t lo, int64_t hi,
                                         EnumStats* stats) const {
  std::vector<int64_t> out;
  for_each(lo, hi, [&out](int64_t n) { out.push_back(n); }, stats);
  return out;
}

int64_t DigitSet::count_block(int64_t k) const {
  if (k < 0) throw domain_error("DigitSet::count_block: k must be >= 0");
  return checked_pow(base_ - 1, k);
}

int64_t DigitSet::count_prefix(int64_t H) const {
  if (H < 0) throw domain_error("DigitSet::count_prefix: H must be >= 0");
  if (H == 0) return 0;
  const std::vector<int64_t> pw = powers_covering(base_, H);
  const int L = (int)pw.size() - 1;

  // Members of [0, H]: blocks with a digit below H's digit at each position
  // (prefix above still matching H), then H itself if every digit passes.
  int64_t count = 0;
  bool prefix_ok = true;
  for (int i = L - 1; i >= 0 && prefix_ok; --i) {
    const int64_t di = (H / pw[(size_t)i]) % base_;
    int64_t below = di - (di > excluded_ ? 1 : 0);
    count = checked_add(count, checked_mul(below, count_block(i)));
    if (di == excluded_) prefix_ok = false;
  }
  if (prefix_ok) count = checked_add(count, 1);
  return count - 1;  // drop n = 0
}

double fourier_decay_exponent(int64_t g) {
  if (g < 3) throw domain_error("fourier_decay_exponent: g must be >= 3");
  return 1.0 - std::log(std::log((double)g) + 1.0) / std::log((double)(g - 1));
}

int64_t power_exponent(int64_t g, int64_t X) {
  if (g < 2 || X < 1) return -1;
  int64_t v = 1, m = 0;
  while (v < X) {
    v = checked_mul(v, g);
    ++m;
  }
  return v == X ? m : -1;
}

IntervalChoice choose_interval(const DigitSet& ds, int64_t X) {
  const int64_t g = ds.base();
  const int64_t m = power_exponent(g, X);
  if (m < 2)
    throw domain_error("choose_interval: X must equal g^m with m >= 2");

  const double lambda = fourier_decay_exponent(g);
  const double lx = std::log((double)X);
  const double target = std::pow((double)X / (lx * lx * lx), 1.0 / (2.0 * lambda));

  // Nearest k with (g-1)^k ~ target; half-way ties round down.
  double kk = std::log(target) / std::log((double)(g - 1));
  int64_t k = (int64_t)std::ceil(kk - 0.5);
  if (k < 0) k = 0;

  IntervalChoice c;
  c.k = k;
  c.target = target;
  c.achieved = checked_pow(g - 1, k) - 1;
  c.spec.X = X;
  c.spec.H = checked_pow(g, k);
  c.spec.exponent = m;
  c.h_at_least_x = c.spec.H >= X;
  return c;
}

}  // namespace mdd
