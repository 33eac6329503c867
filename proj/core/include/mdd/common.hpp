#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace mdd {

inline constexpr const char* kToolVersion = "0.1.0";

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bad parameters or misconfigured runs.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tripped numeric guard: 64-bit overflow, node-budget exhaustion, or a
// residue check that should have been negligible.
struct numeric_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);
int64_t checked_pow(int64_t base, int64_t exp);

// x reduced to [0, 1).
double reduce_mod1(double x);

// frac(n * alpha) for integer n >= 0, alpha in [0, 1), computed from the
// 128-bit product of n with alpha's 53-bit mantissa. A plain double product
// n * alpha loses all phase bits once n * alpha ~ 2^53; this keeps the
// fractional part accurate to ~1 ulp for any n < 2^62.
double frac_mul(double alpha, int64_t n);

// e(t) = exp(2 pi i t)
inline cplx unit_exp(double t) { return std::polar(1.0, kTwoPi * t); }

// Compensated accumulator (error-recycling summation).
template <typename T>
class KahanSum {
 public:
  void add(T v) {
    T y = v - c_;
    T t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  T value() const { return s_; }

 private:
  T s_{0};
  T c_{0};
};

class KahanComplex {
 public:
  void add(cplx v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  KahanSum<double> re_;
  KahanSum<double> im_;
};

// Fixed chunk partition of [0, total): chunk c covers
// [c*chunk_size, min((c+1)*chunk_size, total)). The partition depends only
// on (total, chunk_size), never on the worker count, so per-chunk results
// folded in chunk order reproduce bit-identically for any thread count.
int64_t chunk_count(int64_t total, int64_t chunk_size);
void for_chunks(int64_t total, int64_t chunk_size, int threads,
                const std::function<void(int64_t chunk_index, int64_t begin,
                                         int64_t end)>& body);

}  // namespace mdd
