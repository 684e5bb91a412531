#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "peakon/error.hpp"

namespace peakon::quad {

struct Options {
  double tol = 1e-10;      // relative to the integral of |f| over the interval
  int max_levels = 60;     // bisection depth of any single subinterval
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;  // estimate of the integral of |f|
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value, error, abs_value;
  int level;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
Segment gk15(F& f, double a, double b, int level) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::fabs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  return {a, b, value, std::fabs((kronrod - gauss) * half), std::fabs(abs_sum * half), level};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]; b < a
/// integrates in reverse. The interval with the largest error estimate is
/// bisected until the total error drops below tol times the integral of |f|
/// (so cancelling integrands are resolved to roundoff, not to an absolute
/// floor). Throws QuadratureError when the budget is exhausted.
template <typename F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
  Result res;
  if (a == b) return res;
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  int evals = 0;
  auto counted = [&](double x) {
    ++evals;
    return f(x);
  };

  std::priority_queue<detail::Segment> heap;
  double total = 0.0, total_err = 0.0, total_abs = 0.0;
  auto push = [&](const detail::Segment& s) {
    heap.push(s);
    total += s.value;
    total_err += s.error;
    total_abs += s.abs_value;
  };
  push(detail::gk15(counted, a, b, 0));

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (;;) {
    const double target = std::max(opts.tol * std::max(std::fabs(total), total_abs), 50 * eps * total_abs);
    if (total_err <= target || total_abs == 0.0) break;
    if (static_cast<int>(heap.size()) >= opts.max_intervals)
      throw QuadratureError("quadrature did not converge: interval budget exhausted on [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");
    detail::Segment worst = heap.top();
    heap.pop();
    if (worst.level >= opts.max_levels || !std::isfinite(worst.value))
      throw QuadratureError("quadrature did not converge near [" + std::to_string(worst.a) + ", " +
                            std::to_string(worst.b) + "]");
    total -= worst.value;
    total_err -= worst.error;
    total_abs -= worst.abs_value;
    const double mid = 0.5 * (worst.a + worst.b);
    push(detail::gk15(counted, worst.a, mid, worst.level + 1));
    push(detail::gk15(counted, mid, worst.b, worst.level + 1));
  }

  // Re-sum from the leaves to drop the running-sum rounding.
  double value = 0.0, err = 0.0, abs_value = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    abs_value += heap.top().abs_value;
    heap.pop();
  }
  res.value = sign * value;
  res.error = err;
  res.abs_value = abs_value;
  res.evaluations = evals;
  return res;
}

}  // namespace peakon::quad
