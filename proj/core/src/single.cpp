#include "peakon/single.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>

#include "peakon/ode.hpp"

namespace peakon {

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::BlowUp:
      return "blow-up";
    case EventKind::Extinction:
      return "extinction";
    case EventKind::DirectionReversal:
      return "direction-reversal";
    case EventKind::Equilibrium:
      return "equilibrium";
    case EventKind::BranchSwitch:
      return "branch-switch";
    case EventKind::Collision:
      return "collision";
  }
  return "?";
}

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::HorizonReached:
      return "horizon-reached";
    case Termination::BlowUp:
      return "blow-up";
    case Termination::Extinction:
      return "extinction";
    case Termination::Equilibrium:
      return "equilibrium";
    case Termination::DomainError:
      return "domain-error";
    case Termination::Collision:
      return "collision";
  }
  return "?";
}

std::vector<const EventRecord*> Trajectory::events_of(EventKind kind) const {
  std::vector<const EventRecord*> out;
  for (const auto& e : events)
    if (e.kind == kind) out.push_back(&e);
  return out;
}

Rates rhs1(const ReducedSystem& rs, const PeakonState& state) {
  return {rs.amplitude_rate(state.A), rs.g0_at(state.A)};
}

double accel1(const ReducedSystem& rs, double A) { return rs.acceleration(A); }

namespace {

// (1/2) d/dA rate(A)^2, the amplitude acceleration of the second-order form.
double half_rate_sq_slope(const ReducedSystem& rs, double A) {
  const double h = 1e-5 * std::max(std::fabs(A), 1.0);
  auto sq = [&](double a) {
    const double r = rs.amplitude_rate(a);
    return r * r;
  };
  try {
    return 0.5 * (sq(A - 2 * h) - 8 * sq(A - h) + 8 * sq(A + h) - sq(A + 2 * h)) / (12 * h);
  } catch (const Error&) {
  }
  try {
    return 0.5 * (-3 * sq(A) + 4 * sq(A + h) - sq(A + 2 * h)) / (2 * h);
  } catch (const Error&) {
  }
  return 0.5 * (3 * sq(A) - 4 * sq(A - h) + sq(A - 2 * h)) / (2 * h);
}

// Bisection for a sign change of fn along the dense output of the last step.
template <typename Fn>
double locate(const ode::DormandPrince& solver, std::vector<double>& buf, Fn&& fn, double tol) {
  double lo = solver.t_prev(), hi = solver.t();
  solver.dense(lo, buf);
  double flo = fn(buf);
  for (int it = 0; it < 200 && std::fabs(hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    solver.dense(mid, buf);
    const double fm = fn(buf);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Local exponent of |rate| against the distance to a turning amplitude.
double turning_exponent(const ReducedSystem& rs, double A_turn) {
  const double scale = std::max(std::fabs(A_turn), 1e-3);
  const double d1 = 1e-3 * scale, d2 = 1e-5 * scale;
  const double inward = A_turn > 0 ? -1.0 : 1.0;
  for (double side : {inward, -inward}) {
    try {
      const double r1 = std::fabs(rs.amplitude_rate(A_turn + side * d1));
      const double r2 = std::fabs(rs.amplitude_rate(A_turn + side * d2));
      if (r1 > 0 && r2 > 0) return std::log(r1 / r2) / std::log(d1 / d2);
    } catch (const Error&) {
    }
  }
  return std::nan("");
}

struct StepRecord {
  double t, A, Adot;
};

// Power-law extrapolation of the blow-up time from the last accepted steps:
// |A'| ~ C |A|^beta with beta > 1 leaves |A| / ((beta - 1) |A'|) to go.
std::optional<double> fit_blowup_time(const std::deque<StepRecord>& recent, double t_hit, double A_hit,
                                      double Adot_hit, int dir) {
  if (recent.size() < 4) return std::nullopt;
  std::vector<double> x, y;
  for (const auto& r : recent) {
    if (r.A == 0 || r.Adot == 0) return std::nullopt;
    x.push_back(std::log(std::fabs(r.A)));
    y.push_back(std::log(std::fabs(r.Adot)));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) return std::nullopt;
  const double beta = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + beta * (x[i] - mx));
    rss += r * r;
  }
  if (beta <= 1.05 || std::sqrt(rss / n) > 0.05) return std::nullopt;
  return t_hit + dir * std::fabs(A_hit) / ((beta - 1) * std::fabs(Adot_hit));
}

}  // namespace

Trajectory integrate1(const ReducedSystem& rs, const PeakonState& init, double horizon,
                      const IntegratorOptions& opts) {
  Trajectory traj;
  const int dir = horizon >= init.t ? 1 : -1;
  traj.direction = dir;
  const bool osc = opts.oscillatory;
  const std::size_t dim = osc ? 3 : 2;
  const std::size_t ix = dim - 1;

  ode::Rhs rhs;
  if (osc) {
    rhs = [&rs](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = y[1];
      dy[1] = half_rate_sq_slope(rs, y[0]);
      dy[2] = rs.g0_at(y[0]);
    };
  } else {
    rhs = [&rs](double, std::span<const double> y, std::span<double> dy) {
      dy[0] = rs.amplitude_rate(y[0]);
      dy[1] = rs.g0_at(y[0]);
    };
  }

  ode::Options oo;
  oo.rtol = oo.atol = opts.tol;
  oo.h_max = opts.h_max;
  ode::DormandPrince solver(rhs, dim, oo);

  auto adot_of = [&](std::span<const double> y) { return osc ? y[1] : rs.amplitude_rate(y[0]); };
  auto make_sample = [&](double t, std::span<const double> y) {
    const double A = y[0];
    const double Adot = adot_of(y);
    return TrajectorySample{t, A, y[ix], rs.g0_at(A), rs.alpha_at(A) * Adot};
  };
  auto stop = [&](Termination term, std::string msg = {}) {
    traj.termination = term;
    traj.message = std::move(msg);
  };

  std::vector<double> y0(dim);
  std::vector<double> buf(dim);
  try {
    y0[0] = init.A;
    y0[ix] = init.X;
    if (osc) {
      const double r = rs.amplitude_rate(init.A);
      y0[1] = opts.branch >= 0 ? r : -r;
    }
    solver.start(init.t, y0, dir);
    traj.samples.push_back(make_sample(init.t, y0));
  } catch (const Error& e) {
    stop(Termination::DomainError, e.what());
    return traj;
  }

  long k = 1;
  auto next_sample_time = [&] { return init.t + dir * static_cast<double>(k) * opts.sample_dt; };
  std::deque<StepRecord> recent;
  int stalled = 0;
  double stall_start = init.t;
  bool equilibrium_seen = false;
  double g_prev = traj.samples.back().Xdot;

  try {
    while (solver.step(horizon)) {
      const double t = solver.t();
      const auto& y = solver.y();
      const double A = y[0];
      const double A_prev = solver.y_prev()[0];
      const double Adot = osc ? y[1] : solver.dydt()[0];
      recent.push_back({t, A, Adot});
      if (recent.size() > 10) recent.pop_front();

      // Terminating events are located first so that samples stop there.
      std::optional<double> t_end;
      std::optional<Termination> term;

      if (std::fabs(A) > opts.A_max) {
        const double t_hit = locate(
            solver, buf, [&](const std::vector<double>& s) { return std::fabs(s[0]) - opts.A_max; },
            opts.event_time_tol);
        solver.dense(t_hit, buf);
        const double A_hit = buf[0];
        const double Adot_hit = adot_of(buf);
        const auto t_star = fit_blowup_time(recent, t_hit, A_hit, Adot_hit, dir);
        traj.events.push_back({EventKind::BlowUp,
                               t_star.value_or(t_hit),
                               {{"t_hit", t_hit}, {"A_hit", A_hit}, {"fitted", t_star ? 1.0 : 0.0}}});
        t_end = t_hit;
        term = Termination::BlowUp;
      } else if (!osc && A_prev != 0 && (A > 0) != (A_prev > 0)) {
        const double t0 = locate(
            solver, buf, [](const std::vector<double>& s) { return s[0]; }, opts.event_time_tol);
        solver.dense(t0, buf);
        traj.events.push_back({EventKind::Extinction, t0, {{"crossing", 1.0}, {"Adot", rs.amplitude_rate(buf[0])}}});
        t_end = t0;
        term = Termination::Extinction;
      } else if (!osc && std::fabs(A) < opts.eps_ext && std::fabs(Adot) < opts.eps_ext) {
        traj.events.push_back({EventKind::Extinction, t, {{"crossing", 0.0}, {"Adot", Adot}, {"A", A}}});
        t_end = t;
        term = Termination::Extinction;
      }

      // Emit samples up to the end of this step (or the terminating event).
      const double t_lim = t_end.value_or(t);
      while ((next_sample_time() - t_lim) * dir <= 1e-12 * opts.sample_dt) {
        const double ts = next_sample_time();
        solver.dense(ts, buf);
        traj.samples.push_back(make_sample(ts, buf));
        ++k;
      }

      // Direction reversal: zero of g0(A(t)) inside the step.
      const double g_now = rs.g0_at(A);
      if (t_end) {
        solver.dense(*t_end, buf);
      }
      const double g_check = t_end ? rs.g0_at(buf[0]) : g_now;
      if (g_prev != 0 && g_check != 0 && (g_prev > 0) != (g_check > 0)) {
        const double tr = locate(
            solver, buf, [&](const std::vector<double>& s) { return rs.g0_at(s[0]); }, opts.event_time_tol);
        solver.dense(tr, buf);
        traj.events.push_back({EventKind::DirectionReversal, tr, {{"X", buf[ix]}, {"A", buf[0]}}});
      }
      g_prev = g_check;

      if (osc && solver.y_prev()[1] != 0 && (y[1] > 0) != (solver.y_prev()[1] > 0)) {
        const double tb = locate(
            solver, buf, [](const std::vector<double>& s) { return s[1]; }, opts.event_time_tol);
        solver.dense(tb, buf);
        traj.events.push_back(
            {EventKind::BranchSwitch, tb, {{"A", buf[0]}, {"exponent", turning_exponent(rs, buf[0])}}});
      }

      if (term) {
        if (traj.samples.back().t != *t_end) {
          solver.dense(*t_end, buf);
          traj.samples.push_back(make_sample(*t_end, buf));
        }
        stop(*term);
        break;
      }

      if (!osc) {
        if (std::fabs(Adot) < opts.eps_eq && std::fabs(A) >= opts.eps_ext) {
          if (stalled++ == 0) stall_start = t;
          if (stalled >= opts.stall_window && !equilibrium_seen) {
            equilibrium_seen = true;
            traj.events.push_back({EventKind::Equilibrium, stall_start, {{"A", A}}});
            if (opts.stop_at_equilibrium) {
              if (traj.samples.back().t != t) traj.samples.push_back(make_sample(t, y));
              stop(Termination::Equilibrium);
              break;
            }
          }
        } else {
          stalled = 0;
        }
      }
    }
    if (traj.termination == Termination::HorizonReached &&
        std::fabs(traj.samples.back().t - horizon) > 1e-9 * opts.sample_dt) {
      traj.samples.push_back(make_sample(solver.t(), solver.y()));
    }
  } catch (const Error& e) {
    stop(Termination::DomainError, e.what());
  }
  traj.steps = solver.steps();
  if (dir < 0) std::reverse(traj.samples.begin(), traj.samples.end());
  return traj;
}

QuadratureSolution quadrature_solve(const ReducedSystem& rs, double A0, double A1) {
  if (A0 == A1) return {0.0, 0.0};
  constexpr int kProbe = 64;
  double first = 0;
  for (int i = 0; i <= kProbe; ++i) {
    const double y = A0 + (A1 - A0) * i / kProbe;
    const double r = rs.amplitude_rate(y);
    if (r == 0.0) throw EvalError("quadrature_solve: amplitude equilibrium at A = " + std::to_string(y));
    if (i == 0) first = r;
    if ((r > 0) != (first > 0))
      throw EvalError("quadrature_solve: A' changes sign between " + std::to_string(A0) + " and " +
                      std::to_string(A1));
  }
  quad::Options qo{rs.options().quad_tol, rs.options().quad_max_levels};
  // dt = dA / A'(A), dX = g0(A) dA / A'(A).
  const double dt = quad::integrate([&](double y) { return 1.0 / rs.amplitude_rate(y); }, A0, A1, qo).value;
  const double dX =
      quad::integrate([&](double y) { return rs.g0_at(y) / rs.amplitude_rate(y); }, A0, A1, qo).value;
  return {dt, dX};
}

}  // namespace peakon
