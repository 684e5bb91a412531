#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "peakon/error.hpp"

namespace peakon::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_max = std::numeric_limits<double>::infinity();
  double h_init = 0.0;  // 0 picks a step from the initial derivative
  long max_steps = 5'000'000;
};

/// Step size fell below the resolution of t without an accepted step.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Dormand-Prince 5(4) with the 4th-order continuous extension. Integrates in
/// either time direction. A trial step whose right-hand side throws a
/// library Error is treated as rejected and retried with half the step, so the
/// solver backs off from domain boundaries instead of failing outright.
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, std::size_t dim, Options opts = {}) : rhs_(std::move(rhs)), n_(dim), opts_(opts) {
    for (auto* v : {&y_, &y_prev_, &ytmp_, &k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &r1_, &r2_, &r3_, &r4_, &r5_})
      v->assign(n_, 0.0);
  }

  void start(double t0, std::span<const double> y0, double direction) {
    t_ = t_prev_ = t0;
    std::copy(y0.begin(), y0.end(), y_.begin());
    y_prev_ = y_;
    dir_ = direction >= 0 ? 1.0 : -1.0;
    rhs_(t_, y_, k1_);
    h_ = opts_.h_init > 0 ? opts_.h_init : initial_step();
    steps_ = 0;
  }

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  double last_step() const { return t_ - t_prev_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& y_prev() const { return y_prev_; }
  /// Derivative at the current point (FSAL stage).
  const std::vector<double>& dydt() const { return k1_; }
  long steps() const { return steps_; }

  /// Advances by one accepted step without passing t_end. Returns false if
  /// already at t_end.
  bool step(double t_end) {
    if ((t_end - t_) * dir_ <= 0) return false;
    for (;;) {
      double h = dir_ * std::min(std::fabs(h_), opts_.h_max);
      bool last = false;
      if ((t_ + h - t_end) * dir_ >= 0) {
        h = t_end - t_;
        last = true;
      }
      const double resolution = 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t_));
      if (std::fabs(h) < resolution)
        throw StepUnderflow("step size underflow at t = " + std::to_string(t_));
      double err = 0;
      bool ok = true;
      try {
        err = attempt(h);
      } catch (const Error&) {
        ok = false;
      }
      if (!ok || !std::isfinite(err)) {
        h_ = 0.5 * h;
        continue;
      }
      if (err <= 1.0) {
        accept(h, last ? t_end : t_ + h);
        const double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last || std::fabs(h_) < std::fabs(h)) h_ = h * fac;
        return true;
      }
      h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
    }
  }

  /// Dense output on [t_prev, t] of the last accepted step.
  void dense(double t, std::span<double> out) const {
    const double h = t_ - t_prev_;
    const double theta = h == 0 ? 1.0 : (t - t_prev_) / h;
    const double theta1 = 1.0 - theta;
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
  }

 private:
  double initial_step() {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = opts_.atol + opts_.rtol * std::fabs(y_[i]);
      d0 += (y_[i] / sk) * (y_[i] / sk);
      d1 += (k1_[i] / sk) * (k1_[i] / sk);
    }
    d0 = std::sqrt(d0 / n_);
    d1 = std::sqrt(d1 / n_);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, std::min(opts_.h_max, 1.0));
  }

  double attempt(double h) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    const auto& y = y_;
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * a21 * k1_[i];
    rhs_(t_ + c2 * h, ytmp_, k2_);
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    rhs_(t_ + c3 * h, ytmp_, k3_);
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    rhs_(t_ + c4 * h, ytmp_, k4_);
    for (std::size_t i = 0; i < n_; ++i)
      ytmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    rhs_(t_ + c5 * h, ytmp_, k5_);
    for (std::size_t i = 0; i < n_; ++i)
      ytmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    rhs_(t_ + h, ytmp_, k6_);
    for (std::size_t i = 0; i < n_; ++i)
      ytmp_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    rhs_(t_ + h, ytmp_, k7_);
    double err = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double ei = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sk = opts_.atol + opts_.rtol * std::max(std::fabs(y[i]), std::fabs(ytmp_[i]));
      err += (ei / sk) * (ei / sk);
    }
    return std::sqrt(err / n_);
  }

  void accept(double h, double t_new) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    for (std::size_t i = 0; i < n_; ++i) {
      r1_[i] = y_[i];
      r2_[i] = ytmp_[i] - y_[i];
      r3_[i] = h * k1_[i] - r2_[i];
      r4_[i] = r2_[i] - h * k7_[i] - r3_[i];
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
    }
    y_prev_ = y_;
    y_ = ytmp_;
    k1_ = k7_;
    t_prev_ = t_;
    t_ = t_new;
    if (++steps_ > opts_.max_steps) throw StepUnderflow("step budget exhausted at t = " + std::to_string(t_));
  }

  Rhs rhs_;
  std::size_t n_;
  Options opts_;
  double t_ = 0, t_prev_ = 0, h_ = 0, dir_ = 1;
  long steps_ = 0;
  std::vector<double> y_, y_prev_, ytmp_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, r1_, r2_, r3_, r4_, r5_;
};

}  // namespace peakon::ode
