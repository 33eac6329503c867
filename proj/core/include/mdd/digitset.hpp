#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mdd/common.hpp"

namespace mdd {

// Base-g integers that avoid a single digit b, b in {2, ..., g-1}.
// Excluding 0 or 1 would break the power-of-g shift identity
//   n in (X, X+H] and member  <=>  n - X in (0, H] and member
// for X = g^m, H < X, so those are rejected outright.
class DigitSet {
 public:
  DigitSet(int64_t base, int64_t excluded);

  int64_t base() const { return base_; }
  int64_t excluded() const { return excluded_; }

  // true iff no base-g digit of n equals the excluded digit.
  bool contains(int64_t n) const;

  struct EnumStats {
    int64_t nodes_visited = 0;
    int64_t nodes_pruned = 0;
  };

  // Visit the members of (lo, hi] in ascending order by depth-first descent
  // over digit prefixes. A prefix subtree spans [p*g^r, (p+1)*g^r - 1]; any
  // subtree outside (lo, hi] is pruned whole, so the walk costs
  // O(output * digits), not O(hi - lo).
  void for_each(int64_t lo, int64_t hi, const std::function<void(int64_t)>& fn,
                EnumStats* stats = nullptr) const;

  std::vector<int64_t> enumerate(int64_t lo, int64_t hi,
                                 EnumStats* stats = nullptr) const;

  // |members of [0, g^k)| = (g-1)^k.
  int64_t count_block(int64_t k) const;

  // |members of (0, H]| by prefix decomposition; O(g log_g H).
  int64_t count_prefix(int64_t H) const;

 private:
  int64_t base_;
  int64_t excluded_;
};

// 1 - log(log g + 1) / log(g - 1); grows toward 1 as g grows.
double fourier_decay_exponent(int64_t g);

// m such that g^m == X, or -1 when X is not a power of g.
int64_t power_exponent(int64_t g, int64_t X);

struct IntervalSpec {
  int64_t X = 0;
  int64_t H = 0;
  int64_t exponent = 0;  // X = g^exponent
};

struct IntervalChoice {
  IntervalSpec spec;
  int64_t k = 0;            // H = g^k
  double target = 0.0;      // requested digit-set size for (0, H]
  int64_t achieved = 0;     // (g-1)^k - 1
  bool h_at_least_x = false;
};

// Pick H = g^k so that the digit-set size of (0, H] is nearest the target
// (X / (log X)^3)^(1/(2 lambda)); k rounds to nearest, ties toward the
// smaller k. Requires X = g^m with m >= 2. When the formula forces H >= X
// the choice is still returned, flagged, since downstream diagnostics stay
// computable.
IntervalChoice choose_interval(const DigitSet& ds, int64_t X);

}  // namespace mdd
