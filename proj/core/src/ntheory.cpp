#include "mdd/ntheory.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>

namespace mdd {

namespace {

constexpr int64_t kMaxSieveSpan = 200'000'000;  // elements per table
constexpr char kSieveMagic[8] = {'M', 'D', 'D', 'S', 'I', 'E', 'V', '1'};

struct Factorization {
  std::array<int64_t, 16> prime;
  std::array<int, 16> exp;
  int count = 0;
};

Factorization factorize(int64_t n) {
  Factorization f;
  for (int64_t p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.prime[f.count] = p;
    f.exp[f.count] = e;
    ++f.count;
  }
  if (n > 1) {
    f.prime[f.count] = n;
    f.exp[f.count] = 1;
    ++f.count;
  }
  return f;
}

int64_t phi_from_factors(const Factorization& f, const std::array<int, 16>& exp) {
  int64_t r = 1;
  for (int i = 0; i < f.count; ++i) {
    if (exp[i] == 0) continue;
    r = checked_mul(r, f.prime[i] - 1);
    for (int j = 1; j < exp[i]; ++j) r = checked_mul(r, f.prime[i]);
  }
  return r;
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back((char)((v >> (8 * i)) & 0xff));
}

uint64_t get_u64(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= (uint64_t)p[i] << (8 * i);
  return v;
}

}  // namespace

int64_t SieveTable::at(int64_t n) const {
  if (values.empty() || n < lo || n > hi())
    throw domain_error("sieve table does not cover requested n");
  return values[(size_t)(n - lo)];
}

int64_t CumulativeDivisor::sum_to(int64_t m) const {
  if (m < 0 || m > up_to)
    throw domain_error("cumulative divisor table does not cover requested m");
  return m == 0 ? 0 : partial_sums[(size_t)(m - 1)];
}

SieveTable sieve_divisor_count(int64_t lo, int64_t hi) {
  if (lo < 1) throw domain_error("sieve_divisor_count: lo must be >= 1");
  if (hi < lo) throw domain_error("sieve_divisor_count: hi < lo");
  if (hi > (int64_t(1) << 62))
    throw numeric_guard_error("sieve_divisor_count: hi exceeds 2^62");
  if (hi - lo + 1 > kMaxSieveSpan)
    throw numeric_guard_error("sieve_divisor_count: interval too large");

  SieveTable t;
  t.lo = lo;
  t.kind = SieveKind::DivisorCount;
  t.values.assign((size_t)(hi - lo + 1), 0);
  for (int64_t d = 1; d * d <= hi; ++d) {
    // first multiple of d in [lo, hi] that also satisfies d*d <= n
    int64_t first = std::max(d * d, ((lo + d - 1) / d) * d);
    for (int64_t n = first; n <= hi; n += d) {
      t.values[(size_t)(n - lo)] += (d * d == n) ? 1 : 2;
    }
  }
  return t;
}

SieveTable sieve_mobius(int64_t n) {
  if (n < 1) throw domain_error("sieve_mobius: n must be >= 1");
  if (n > kMaxSieveSpan) throw numeric_guard_error("sieve_mobius: n too large");
  SieveTable t;
  t.lo = 1;
  t.kind = SieveKind::Mobius;
  t.values.assign((size_t)n, 0);

  // Linear sieve on the smallest prime factor.
  std::vector<int32_t> spf((size_t)n + 1, 0);
  std::vector<int64_t> primes;
  t.values[0] = 1;  // mu(1)
  for (int64_t i = 2; i <= n; ++i) {
    if (spf[(size_t)i] == 0) {
      spf[(size_t)i] = (int32_t)i;
      primes.push_back(i);
      t.values[(size_t)(i - 1)] = -1;
    }
    for (int64_t p : primes) {
      if (p > spf[(size_t)i] || i * p > n) break;
      spf[(size_t)(i * p)] = (int32_t)p;
      t.values[(size_t)(i * p - 1)] =
          (p == spf[(size_t)i]) ? 0 : -t.values[(size_t)(i - 1)];
    }
  }
  return t;
}

SieveTable sieve_totient(int64_t n) {
  if (n < 1) throw domain_error("sieve_totient: n must be >= 1");
  if (n > kMaxSieveSpan) throw numeric_guard_error("sieve_totient: n too large");
  SieveTable t;
  t.lo = 1;
  t.kind = SieveKind::Totient;
  t.values.assign((size_t)n, 0);

  std::vector<int32_t> spf((size_t)n + 1, 0);
  std::vector<int64_t> primes;
  t.values[0] = 1;  // phi(1)
  for (int64_t i = 2; i <= n; ++i) {
    if (spf[(size_t)i] == 0) {
      spf[(size_t)i] = (int32_t)i;
      primes.push_back(i);
      t.values[(size_t)(i - 1)] = i - 1;
    }
    for (int64_t p : primes) {
      if (p > spf[(size_t)i] || i * p > n) break;
      spf[(size_t)(i * p)] = (int32_t)p;
      t.values[(size_t)(i * p - 1)] = (p == spf[(size_t)i])
                                          ? t.values[(size_t)(i - 1)] * p
                                          : t.values[(size_t)(i - 1)] * (p - 1);
    }
  }
  return t;
}

CumulativeDivisor cumulative_divisor(int64_t up_to) {
  if (up_to < 1) throw domain_error("cumulative_divisor: up_to must be >= 1");
  SieveTable d2 = sieve_divisor_count(1, up_to);
  CumulativeDivisor c;
  c.up_to = up_to;
  c.partial_sums.resize((size_t)up_to);
  int64_t acc = 0;
  for (int64_t n = 1; n <= up_to; ++n) {
    acc = checked_add(acc, d2.values[(size_t)(n - 1)]);
    c.partial_sums[(size_t)(n - 1)] = acc;
  }
  return c;
}

int64_t ramanujan_sum(int64_t q, int64_t n) {
  if (q < 1) throw domain_error("ramanujan_sum: q must be >= 1");
  if (n < 0) throw domain_error("ramanujan_sum: n must be >= 0");
  if (q == 1) return 1;

  const Factorization f = factorize(q);
  const int64_t d = std::gcd(n, q);

  // Exponents of q/d per prime of q; mu(q/d) needs them all <= 1.
  std::array<int, 16> exp_qd{};
  int mu_sign = 1;
  for (int i = 0; i < f.count; ++i) {
    int64_t dd = d;
    int vd = 0;
    while (dd % f.prime[i] == 0) {
      dd /= f.prime[i];
      ++vd;
    }
    const int e = f.exp[i] - vd;
    exp_qd[(size_t)i] = e;
    if (e >= 2) return 0;  // mu(q/d) = 0
    if (e == 1) mu_sign = -mu_sign;
  }

  std::array<int, 16> exp_q{};
  for (int i = 0; i < f.count; ++i) exp_q[(size_t)i] = f.exp[i];
  const int64_t phi_q = phi_from_factors(f, exp_q);
  const int64_t phi_qd = phi_from_factors(f, exp_qd);
  return mu_sign * (phi_q / phi_qd);
}

int64_t ramanujan_sum_direct(int64_t q, int64_t n) {
  if (q < 1) throw domain_error("ramanujan_sum_direct: q must be >= 1");
  if (n < 0) throw domain_error("ramanujan_sum_direct: n must be >= 0");
  const int64_t r = n % q;
  KahanComplex acc;
  for (int64_t a = 1; a <= q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    acc.add(unit_exp((double)((a * r) % q) / (double)q));
  }
  const cplx v = acc.value();
  if (std::fabs(v.imag()) >= 1e-6)
    throw numeric_guard_error("ramanujan_sum_direct: imaginary residue >= 1e-6");
  return (int64_t)std::llround(v.real());
}

int64_t mod_inverse(int64_t a, int64_t q) {
  if (q < 1) throw domain_error("mod_inverse: q must be >= 1");
  if (q == 1) return 0;
  a %= q;
  if (a < 0) a += q;
  int64_t r0 = q, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const int64_t k = r0 / r1;
    r0 -= k * r1;
    s0 -= k * s1;
    std::swap(r0, r1);
    std::swap(s0, s1);
  }
  if (r0 != 1) throw domain_error("mod_inverse: arguments are not coprime");
  s0 %= q;
  if (s0 < 0) s0 += q;
  return s0;
}

void save_sieve(const SieveTable& table, const std::string& path) {
  std::string buf;
  buf.reserve(17 + 8 * table.values.size());
  buf.append(kSieveMagic, 8);
  buf.push_back((char)table.kind);
  put_u64(buf, (uint64_t)table.lo);
  put_u64(buf, (uint64_t)table.hi());
  for (int64_t v : table.values) put_u64(buf, (uint64_t)v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw domain_error("save_sieve: cannot open " + path);
  out.write(buf.data(), (std::streamsize)buf.size());
  if (!out) throw domain_error("save_sieve: write failed for " + path);
}

SieveTable load_sieve(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("load_sieve: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 25 || std::memcmp(buf.data(), kSieveMagic, 8) != 0)
    throw domain_error("load_sieve: unknown magic in " + path);

  const auto* p = (const unsigned char*)buf.data();
  const uint8_t kind = p[8];
  if (kind < 1 || kind > 3)
    throw domain_error("load_sieve: unknown kind tag in " + path);
  const auto lo = (int64_t)get_u64(p + 9);
  const auto hi = (int64_t)get_u64(p + 17);
  if (lo < 1 || hi < lo || hi - lo + 1 > kMaxSieveSpan)
    throw domain_error("load_sieve: bad interval in " + path);
  const size_t count = (size_t)(hi - lo + 1);
  if (buf.size() != 25 + 8 * count)
    throw domain_error("load_sieve: truncated payload in " + path);

  SieveTable t;
  t.lo = lo;
  t.kind = (SieveKind)kind;
  t.values.resize(count);
  for (size_t i = 0; i < count; ++i)
    t.values[i] = (int64_t)get_u64(p + 25 + 8 * i);
  return t;
}

}  // namespace mdd
