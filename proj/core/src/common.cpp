#include "mdd/common.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mdd {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r))
    throw numeric_guard_error("64-bit addition overflow");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw numeric_guard_error("64-bit multiplication overflow");
  return r;
}

int64_t checked_pow(int64_t base, int64_t exp) {
  if (base < 0 || exp < 0) throw domain_error("checked_pow: negative input");
  int64_t r = 1;
  for (int64_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

double reduce_mod1(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // x was a hair below an integer
  return f;
}

double frac_mul(double alpha, int64_t n) {
  if (n < 0) throw domain_error("frac_mul: n must be nonnegative");
  if (alpha < 0.0 || alpha >= 1.0) alpha = reduce_mod1(alpha);
  if (alpha == 0.0 || n == 0) return 0.0;

  int e2 = 0;
  const double m = std::frexp(alpha, &e2);  // alpha = m * 2^e2, m in [0.5, 1)
  const auto mant = (uint64_t)std::llround(std::ldexp(m, 53));
  const int shift = 53 - e2;  // alpha = mant * 2^-shift, shift >= 53

  unsigned __int128 p = (unsigned __int128)(uint64_t)n * mant;
  if (shift < 128) p &= (((unsigned __int128)1 << shift) - 1);
  if (p == 0) return 0.0;

  const auto hi = (uint64_t)(p >> 64);
  const auto lo = (uint64_t)p;
  double f = std::ldexp((double)hi, 64 - shift) + std::ldexp((double)lo, -shift);
  if (f >= 1.0) f = std::nextafter(1.0, 0.0);
  return f;
}

int64_t chunk_count(int64_t total, int64_t chunk_size) {
  if (chunk_size < 1) throw domain_error("chunk_size must be positive");
  if (total <= 0) return 0;
  return (total + chunk_size - 1) / chunk_size;
}

void for_chunks(int64_t total, int64_t chunk_size, int threads,
                const std::function<void(int64_t, int64_t, int64_t)>& body) {
  const int64_t n_chunks = chunk_count(total, chunk_size);
  if (n_chunks == 0) return;

  auto run_chunk = [&](int64_t c) {
    const int64_t begin = c * chunk_size;
    const int64_t end = std::min(total, begin + chunk_size);
    body(c, begin, end);
  };

  if (threads <= 1 || n_chunks == 1) {
    for (int64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_workers = (int)std::min<int64_t>(threads, n_chunks);
  std::vector<std::thread> pool;
  pool.reserve((size_t)n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mdd
