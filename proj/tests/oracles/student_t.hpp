#pragma once

// Student-t upper quantile by Simpson integration of the density and
// bisection. Slow but independent of any table.

#include <cmath>
#include <numbers>

namespace oracle {

inline double t_density(double x, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  return c * std::pow(1.0 + x * x / df, -(df + 1) / 2);
}

// P(0 <= T <= x)
inline double t_half_cdf(double x, double df, int panels = 20000) {
  const double h = x / panels;
  double s = t_density(0, df) + t_density(x, df);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * t_density(k * h, df);
  return s * h / 3.0;
}

inline double t_quantile_975(double df) {
  double lo = 0.0, hi = 20.0;
  while (t_half_cdf(hi, df) < 0.475) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t_half_cdf(mid, df) < 0.475 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
