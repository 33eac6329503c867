#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdd/common.hpp"

namespace mdd {

enum class SieveKind : uint8_t { DivisorCount = 1, Mobius = 2, Totient = 3 };

// Values of a multiplicative function on the interval [lo, hi].
// Immutable after construction; safe to read from concurrent workers.
struct SieveTable {
  int64_t lo = 1;
  SieveKind kind = SieveKind::DivisorCount;
  std::vector<int64_t> values;

  int64_t hi() const { return lo + (int64_t)values.size() - 1; }
  bool covers(int64_t a, int64_t b) const {
    return !values.empty() && lo <= a && a <= b && b <= hi();
  }
  // Bounds-checked element access; hot loops index `values` directly after
  // one covers() check.
  int64_t at(int64_t n) const;
};

// Prefix sums of d2: partial_sums[m-1] = sum_{n<=m} d2(n).
struct CumulativeDivisor {
  int64_t up_to = 0;
  std::vector<int64_t> partial_sums;

  int64_t sum_to(int64_t m) const;  // 0 <= m <= up_to; sum_to(0) = 0
};

// d2(n) for n in [lo, hi], by marking multiples of every d <= sqrt(hi):
// the pair {d, n/d} with d*d <= n is counted at its small member, so
// d2(n) = 2 #{d | n : d*d < n} + [n is a perfect square].
SieveTable sieve_divisor_count(int64_t lo, int64_t hi);

SieveTable sieve_mobius(int64_t n);
SieveTable sieve_totient(int64_t n);

CumulativeDivisor cumulative_divisor(int64_t up_to);

// c_q(n) = mu(q/d) phi(q) / phi(q/d) with d = gcd(n, q); exact integer.
int64_t ramanujan_sum(int64_t q, int64_t n);

// The defining sum over residues a coprime to q of e(a n / q), evaluated in
// complex arithmetic; real part rounded to the nearest integer. Signals if
// the imaginary part is not < 1e-6 in magnitude. Oracle for ramanujan_sum.
int64_t ramanujan_sum_direct(int64_t q, int64_t n);

// abar in [0, q) with a*abar == 1 (mod q); signals when gcd(a, q) != 1.
int64_t mod_inverse(int64_t a, int64_t q);

// Binary sieve cache: 8-byte magic "MDDSIEV1", one kind byte, lo and hi as
// little-endian unsigned 64-bit, then values as little-endian signed 64-bit.
// The loader rejects unknown magic or inconsistent sizes.
void save_sieve(const SieveTable& table, const std::string& path);
SieveTable load_sieve(const std::string& path);

}  // namespace mdd
