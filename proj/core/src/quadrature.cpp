#include "mdd/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace mdd {

namespace {

// Legendre P_n(z) and its derivative at z, by the three-term recurrence.
void legendre8(long double z, long double& p, long double& dp) {
  const int n = 8;
  long double p1 = 1.0L, p2 = 0.0L;
  for (int j = 0; j < n; ++j) {
    const long double p3 = p2;
    p2 = p1;
    p1 = ((2 * j + 1) * z * p2 - j * p3) / (j + 1);
  }
  p = p1;
  dp = n * (z * p1 - p2) / (z * z - 1.0L);
}

}  // namespace

const GaussLegendre8& gl8() {
  static const GaussLegendre8 rule = [] {
    GaussLegendre8 r{};
    const int n = 8;
    for (int i = 0; i < n / 2; ++i) {
      long double z =
          std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
      long double p = 0, dp = 0;
      for (int it = 0; it < 100; ++it) {
        legendre8(z, p, dp);
        const long double z1 = z;
        z = z1 - p / dp;
        if (std::fabs(z - z1) < 1e-19L) break;
      }
      legendre8(z, p, dp);  // derivative at the converged root
      r.node[i] = (double)-z;
      r.node[n - 1 - i] = (double)z;
      r.weight[i] = r.weight[n - 1 - i] =
          (double)(2.0L / ((1.0L - z * z) * dp * dp));
    }
    return r;
  }();
  return rule;
}

}  // namespace mdd
