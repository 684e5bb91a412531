#include "peakon/npeakon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "peakon/ode.hpp"

namespace peakon {

FieldValue field_at(const NPeakonState& state, double x) {
  FieldValue v{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double d = x - state.x[i];
    const double w = state.a[i] * std::exp(-std::fabs(d));
    v.u += w;
    if (d > 0) {
      v.ux_left -= w;
      v.ux_right -= w;
    } else if (d < 0) {
      v.ux_left += w;
      v.ux_right += w;
    } else {
      v.ux_left += w;
      v.ux_right -= w;
    }
  }
  return v;
}

NRates rhsN(const ReducedSystem& rs, const NPeakonState& state, double a_min) {
  const std::size_t n = state.size();
  NRates r{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(state.a[i]) < a_min)
      throw EvalError("peakon " + std::to_string(i) + " amplitude below guard");
    const FieldValue fv = field_at(state, state.x[i]);
    r.adot[i] = 0.5 * rs.slope_integral(Which::F, fv.u, fv.ux_left, fv.ux_right);
    r.xdot[i] = -rs.slope_integral(Which::G, fv.u, fv.ux_left, fv.ux_right) / (2.0 * state.a[i]);
  }
  return r;
}

namespace {

double min_gap(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.size(); ++i) g = std::min(g, s[i] - s[i - 1]);
  return g;
}

}  // namespace

NTrajectory integrateN(const ReducedSystem& rs, const NPeakonState& init, double horizon,
                       const NIntegratorOptions& opts) {
  NTrajectory traj;
  const std::size_t n = init.size();
  const int dir = horizon >= init.t ? 1 : -1;
  traj.direction = dir;

  auto unpack = [n](double t, std::span<const double> y) {
    NPeakonState s;
    s.t = t;
    s.a.assign(y.begin(), y.begin() + n);
    s.x.assign(y.begin() + n, y.end());
    return s;
  };
  ode::Rhs rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const NRates r = rhsN(rs, unpack(t, y), opts.a_min);
    std::copy(r.adot.begin(), r.adot.end(), dy.begin());
    std::copy(r.xdot.begin(), r.xdot.end(), dy.begin() + n);
  };

  ode::Options oo;
  oo.rtol = oo.atol = opts.tol;
  oo.h_max = opts.h_max;
  ode::DormandPrince solver(rhs, 2 * n, oo);

  std::vector<double> y0(init.a);
  y0.insert(y0.end(), init.x.begin(), init.x.end());
  std::vector<double> buf(2 * n);
  auto sample_of = [&](double t, std::span<const double> y) {
    return NSample{t, std::vector<double>(y.begin(), y.begin() + n), std::vector<double>(y.begin() + n, y.end())};
  };
  auto xs = [n](std::span<const double> y) { return y.subspan(n); };
  auto min_abs_a = [n](std::span<const double> y) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, std::fabs(y[i]));
    return m;
  };
  auto max_abs_a = [n](std::span<const double> y) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(y[i]));
    return m;
  };

  try {
    solver.start(init.t, y0, dir);
  } catch (const Error& e) {
    traj.termination = Termination::DomainError;
    traj.message = e.what();
    traj.samples.push_back(sample_of(init.t, y0));
    return traj;
  }
  traj.samples.push_back(sample_of(init.t, y0));

  long k = 1;
  auto next_sample_time = [&] { return init.t + dir * static_cast<double>(k) * opts.sample_dt; };
  auto locate = [&](auto&& fn) {
    double lo = solver.t_prev(), hi = solver.t();
    solver.dense(lo, buf);
    const double flo = fn(std::span<const double>(buf));
    for (int it = 0; it < 200 && std::fabs(hi - lo) > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      solver.dense(mid, buf);
      if ((fn(std::span<const double>(buf)) > 0) == (flo > 0))
        lo = mid;
      else
        hi = mid;
    }
    return hi;
  };

  try {
    while (solver.step(horizon)) {
      std::span<const double> y(solver.y());
      std::optional<double> t_end;
      if (min_gap(xs(y)) < opts.gap_min) {
        t_end = locate([&](std::span<const double> s) { return min_gap(xs(s)) - opts.gap_min; });
        traj.events.push_back({EventKind::Collision, *t_end, {{"gap_min", opts.gap_min}}});
        traj.termination = Termination::Collision;
      } else if (min_abs_a(y) < opts.a_min) {
        t_end = locate([&](std::span<const double> s) { return min_abs_a(s) - opts.a_min; });
        traj.events.push_back({EventKind::Extinction, *t_end, {{"a_min", opts.a_min}}});
        traj.termination = Termination::Extinction;
      } else if (max_abs_a(y) > opts.A_max) {
        t_end = locate([&](std::span<const double> s) { return max_abs_a(s) - opts.A_max; });
        traj.events.push_back({EventKind::BlowUp, *t_end, {{"A_max", opts.A_max}}});
        traj.termination = Termination::BlowUp;
      }
      const double t_lim = t_end.value_or(solver.t());
      while ((next_sample_time() - t_lim) * dir <= 1e-12 * opts.sample_dt) {
        solver.dense(next_sample_time(), buf);
        traj.samples.push_back(sample_of(next_sample_time(), buf));
        ++k;
      }
      if (t_end) {
        if (traj.samples.back().t != *t_end) {
          solver.dense(*t_end, buf);
          traj.samples.push_back(sample_of(*t_end, buf));
        }
        break;
      }
    }
    if (traj.termination == Termination::HorizonReached &&
        std::fabs(traj.samples.back().t - horizon) > 1e-9 * opts.sample_dt)
      traj.samples.push_back(sample_of(solver.t(), solver.y()));
  } catch (const Error& e) {
    traj.termination = Termination::DomainError;
    traj.message = e.what();
  }
  traj.steps = solver.steps();
  if (dir < 0) std::reverse(traj.samples.begin(), traj.samples.end());
  return traj;
}

}  // namespace peakon
