#pragma once

// Independent reference values used by several test files. Nothing here calls
// into the reduction or integrator code under test.

#include <cmath>
#include <vector>

namespace oracle {

// Classical Camassa-Holm peakon system.
inline void ch_rates(const std::vector<double>& a, const std::vector<double>& x, std::vector<double>& adot,
                     std::vector<double>& xdot) {
  const std::size_t n = a.size();
  adot.assign(n, 0.0);
  xdot.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = x[i] - x[j];
      const double e = std::exp(-std::fabs(d));
      xdot[i] += a[j] * e;
      if (j != i) adot[i] += a[i] * a[j] * (d > 0 ? 1.0 : -1.0) * e;
    }
}

// Composite Simpson rule on [lo, hi] with n (even) panels.
template <typename F>
double simpson(F&& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// (1/(2A)) int_{-A}^{A} h(A, y) dy by Simpson on a fine grid.
template <typename H>
double reduced_by_simpson(H&& h, double A) {
  return simpson([&](double y) { return h(A, y); }, -A, A, 4000) / (2.0 * A);
}

}  // namespace oracle
