#include "peakon/verify.hpp"

#include <algorithm>
#include <cmath>

#include "peakon/error.hpp"

namespace peakon {

Functionals functionals_of(double t, const std::vector<double>& a, const std::vector<double>& x) {
  double M = 0, H1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    M += a[i];
    for (std::size_t j = 0; j < a.size(); ++j) H1 += a[i] * a[j] * std::exp(-std::fabs(x[i] - x[j]));
  }
  return {t, 2 * M, 2 * H1};
}

std::vector<Functionals> functionals(const Trajectory& traj) {
  std::vector<Functionals> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back({s.t, 2 * s.A, 2 * s.A * s.A});
  return out;
}

std::vector<Functionals> functionals(const NTrajectory& traj) {
  std::vector<Functionals> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) out.push_back(functionals_of(s.t, s.a, s.x));
  return out;
}

Drift functional_drift(const std::vector<Functionals>& series) {
  Drift d{0, 0};
  if (series.empty()) return d;
  for (const auto& f : series) {
    d.M = std::max(d.M, std::fabs(f.M - series.front().M));
    d.H1 = std::max(d.H1, std::fabs(f.H1 - series.front().H1));
  }
  return d;
}

double ode_residual(const ReducedSystem& rs, const Trajectory& traj, bool oscillatory) {
  const auto& s = traj.samples;
  if (s.size() < 5) throw Error("ode_residual needs at least 5 samples, got " + std::to_string(s.size()));
  double worst = 0;
  bool any = false;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    const double h = s[i + 1].t - s[i].t;
    bool uniform = h > 0;
    for (std::size_t j = i - 2; j < i + 2 && uniform; ++j)
      uniform = std::fabs((s[j + 1].t - s[j].t) - h) <= 1e-9 * h;
    if (!uniform) continue;
    auto d4 = [&](auto get) {
      return (get(s[i - 2]) - 8 * get(s[i - 1]) + 8 * get(s[i + 1]) - get(s[i + 2])) / (12 * h);
    };
    const double dA = d4([](const TrajectorySample& x) { return x.A; });
    const double dX = d4([](const TrajectorySample& x) { return x.X; });
    const double rate = rs.amplitude_rate(s[i].A);
    const double rA = oscillatory ? std::fabs(std::fabs(dA) - std::fabs(rate)) : std::fabs(dA - rate);
    const double rX = std::fabs(dX - rs.g0_at(s[i].A));
    worst = std::max({worst, rA, rX});
    any = true;
  }
  if (!any) throw Error("ode_residual found no five-point stencil of equally spaced samples");
  return worst;
}

namespace {

double field(const std::vector<double>& a, const std::vector<double>& x, double at) {
  double u = 0;
  for (std::size_t i = 0; i < a.size(); ++i) u += a[i] * std::exp(-std::fabs(at - x[i]));
  return u;
}

}  // namespace

double offpeak_residual(const std::vector<double>& a, const std::vector<double>& x, const std::vector<double>& grid) {
  if (grid.size() < 2) throw Error("offpeak_residual needs at least two grid points");
  const double h = grid[1] - grid[0];
  if (!(h > 0)) throw Error("offpeak grid must be increasing");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (std::fabs((grid[k] - grid[k - 1]) - h) > 1e-9 * std::max(1.0, std::fabs(grid[k])))
      throw Error("offpeak grid must be equally spaced");
  double worst = 0;
  for (double g : grid) {
    for (double xi : x) {
      if (std::fabs(g - xi) <= 0.01)
        throw Error("grid point " + std::to_string(g) + " lies within 0.01 of a peak at " + std::to_string(xi));
      if ((g - h - xi) * (g + h - xi) <= 0)
        throw Error("difference stencil at " + std::to_string(g) + " straddles a peak");
    }
    const double u = field(a, x, g);
    const double uxx = (field(a, x, g + h) - 2 * u + field(a, x, g - h)) / (h * h);
    worst = std::max(worst, std::fabs(u - uxx));
  }
  return worst;
}

double offpeak_residual(const TrajectorySample& sample, const std::vector<double>& grid) {
  return offpeak_residual(std::vector<double>{sample.A}, std::vector<double>{sample.X}, grid);
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> g(n + 1);
  for (int k = 0; k <= n; ++k) g[k] = lo + (hi - lo) * k / n;
  return g;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerificationReport verify_trajectory(const ReducedSystem& rs, const Trajectory& traj, const VerifyOptions& opts) {
  VerificationReport r;
  r.max_ode_residual = ode_residual(rs, traj, opts.oscillatory);
  r.checks.push_back({"ode_residual", r.max_ode_residual, opts.ode_threshold, r.max_ode_residual < opts.ode_threshold});

  const auto series = functionals(traj);
  r.functional_drift = functional_drift(series);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double A = traj.samples[k].A;
    r.functional_identity =
        std::max({r.functional_identity, std::fabs(series[k].M - 2 * A), std::fabs(series[k].H1 - 2 * A * A)});
  }
  r.checks.push_back({"functional_identity", r.functional_identity, opts.identity_threshold,
                      r.functional_identity <= opts.identity_threshold});

  // Off-peak structure on [X + 1, X + 5] at the last sample, at h and h/2.
  const TrajectorySample& s = traj.final_sample();
  const double h = opts.offpeak_h;
  const int n = static_cast<int>(std::lround(4.0 / h));
  const double coarse = offpeak_residual(s, uniform_grid(s.X + 1, s.X + 5, n));
  const double fine = offpeak_residual(s, uniform_grid(s.X + 1, s.X + 5, 2 * n));
  r.offpeak_residual = coarse;
  const double umax = std::fabs(s.A) * std::exp(-1.0);
  const double threshold = h * h * std::max(umax, 1e-300);
  r.checks.push_back({"offpeak_residual", coarse, threshold, coarse <= threshold});
  r.offpeak_order = (coarse > 0 && fine > 0) ? std::log2(coarse / fine) : 0.0;
  const bool exact = coarse == 0 && fine == 0;
  r.checks.push_back({"offpeak_order", r.offpeak_order, 2.0, exact || std::fabs(r.offpeak_order - 2.0) < 0.2});
  return r;
}

}  // namespace peakon
