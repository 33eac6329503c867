#pragma once

#include <array>
#include <cstdint>
#include <type_traits>

#include "mdd/common.hpp"

namespace mdd {

struct GaussLegendre8 {
  std::array<double, 8> node;    // abscissas on [-1, 1], ascending
  std::array<double, 8> weight;  // sums to 2
};

// Nodes and weights solved once by Newton iteration on the degree-8
// Legendre polynomial; cached for the process lifetime.
const GaussLegendre8& gl8();

// Composite 8-point Gauss-Legendre over [a, b] split into equal panels.
// Works for real- and complex-valued integrands; partial sums are kept in
// long double to absorb cancellation across many panels.
template <typename F>
auto gl8_composite(double a, double b, int64_t panels, F&& f)
    -> decltype(f(a) * 1.0) {
  using R = decltype(f(a) * 1.0);
  if (panels < 1) panels = 1;
  const GaussLegendre8& rule = gl8();
  const double h = (b - a) / (double)panels;
  using Acc = std::conditional_t<std::is_same_v<R, cplx>,
                                 std::complex<long double>, long double>;
  Acc acc{};
  for (int64_t p = 0; p < panels; ++p) {
    const double x0 = a + h * (double)p;
    const double x1 = (p + 1 == panels) ? b : a + h * (double)(p + 1);
    const double mid = 0.5 * (x0 + x1);
    const double half = 0.5 * (x1 - x0);
    for (int i = 0; i < 8; ++i) {
      acc += (Acc)(f(mid + half * rule.node[i]) * (half * rule.weight[i]));
    }
  }
  return (R)acc;
}

}  // namespace mdd
