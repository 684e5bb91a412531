#include "peakon/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "peakon/error.hpp"
#include "peakon/quadrature.hpp"

namespace peakon {

std::string to_string(AmplitudeClass c) {
  switch (c) {
    case AmplitudeClass::Constant: return "constant";
    case AmplitudeClass::FiniteAsymptote: return "finite-asymptote";
    case AmplitudeClass::Unbounded: return "unbounded";
    case AmplitudeClass::BlowUp: return "blow-up";
    case AmplitudeClass::Extinction: return "extinction";
    case AmplitudeClass::Periodic: return "periodic";
    case AmplitudeClass::SingularDerivative: return "singular-derivative";
    case AmplitudeClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string to_string(PositionClass c) {
  switch (c) {
    case PositionClass::ConstantSpeed: return "constant-speed";
    case PositionClass::FiniteAsymptoticSpeed: return "finite-asymptotic-speed";
    case PositionClass::Braking: return "braking";
    case PositionClass::Runaway: return "runaway";
    case PositionClass::FiniteTimeRunaway: return "finite-time-runaway";
    case PositionClass::WheelspinLimit: return "wheelspin-limit";
    case PositionClass::ThrustReverseBraking: return "thrust-reverse-braking";
    case PositionClass::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string to_string(ExtinctionKind k) { return k == ExtinctionKind::FiniteTime ? "finite-time" : "asymptotic"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "confirmed";
    case Verdict::Consistent: return "consistent";
    case Verdict::Undetermined: return "undetermined";
  }
  return "undetermined";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Exact power family

enum class Lim { Zero, One, Inf };

Lim limit_of(double exponent, bool s_to_inf) {
  if (exponent == 0) return Lim::One;
  if (s_to_inf) return exponent > 0 ? Lim::Inf : Lim::Zero;
  return exponent > 0 ? Lim::Zero : Lim::Inf;
}

const char* lim_text(Lim l) {
  switch (l) {
    case Lim::Zero: return "0";
    case Lim::One: return "const";
    case Lim::Inf: return "inf";
  }
  return "?";
}

Evidence exponent_evidence(const std::string& what, double exponent, bool s_to_inf) {
  Evidence ev;
  ev.condition = what + " ~ s^e";
  ev.statistic = exponent;
  ev.verdict = Verdict::Confirmed;
  ev.detail = std::string(s_to_inf ? "s -> inf" : "s -> 0+") + ": " + what + " -> " + lim_text(limit_of(exponent, s_to_inf));
  return ev;
}

/// Position label from a literal reading of the case text for t >= 0,
/// lambda > 0; nullopt where the text names no case.
std::optional<PositionClass> prose_position(double p, double q, double kappa) {
  if (p > 0 && kappa > 0) {
    if (q > p) return PositionClass::Braking;
    if (q > 0) return PositionClass::Braking;
    return PositionClass::Runaway;
  }
  if (p > 0 && kappa < 0) {
    if (q >= p) return PositionClass::FiniteTimeRunaway;
    if (q > 0) return PositionClass::WheelspinLimit;
    if (q < -p) return PositionClass::Braking;
    if (q > 0 && q < -p) return PositionClass::ThrustReverseBraking;
    return std::nullopt;
  }
  if (p < 0 && kappa < 0) {
    if (q >= p && q > 0) return PositionClass::Runaway;
    if (q >= p && q < 0) return PositionClass::Braking;
    return std::nullopt;
  }
  if (q <= p) return PositionClass::FiniteTimeRunaway;
  if (q < 0) return PositionClass::WheelspinLimit;
  if (q > -p) return PositionClass::Braking;
  if (q > 0 && q < -p) return PositionClass::ThrustReverseBraking;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Numeric probing

enum class Trend { Zero, Constant, Infinite, Undetermined };

const char* trend_text(Trend t) {
  switch (t) {
    case Trend::Zero: return "-> 0";
    case Trend::Constant: return "-> const";
    case Trend::Infinite: return "-> inf";
    case Trend::Undetermined: return "undetermined";
  }
  return "?";
}

/// Points approaching the limit, with z -> 0 as the approach coordinate:
/// z = |y - A*| for a finite limit, z = 1/|y| for an infinite one; `jac` is
/// |dy/dz|.
struct Ladder {
  bool infinite = false;
  double target = 0;
  std::vector<double> y, z, jac;
};

Ladder make_ladder(double A_end, double target, bool infinite, double from_side, const ClassifyOptions& opts) {
  Ladder l;
  l.infinite = infinite;
  l.target = target;
  if (infinite) {
    const double sign = from_side >= 0 ? 1.0 : -1.0;
    const double base = std::max(std::fabs(A_end), 1.0);
    for (int k = 1; k <= opts.ladder_points; ++k) {
      const double y = sign * base * std::ldexp(1.0, k);
      l.y.push_back(y);
      l.z.push_back(1.0 / std::fabs(y));
      l.jac.push_back(y * y);
    }
  } else {
    const double side = from_side >= 0 ? 1.0 : -1.0;
    const double scale = std::max(1.0, std::fabs(target));
    const double base = std::clamp(std::fabs(A_end - target), 1e-8 * scale, opts.ladder_base * scale);
    for (int k = 1; k <= opts.ladder_points; ++k) {
      const double d = base * std::ldexp(1.0, -k);
      l.y.push_back(target + side * d);
      l.z.push_back(d);
      l.jac.push_back(1.0);
    }
  }
  return l;
}

template <typename F>
std::vector<std::optional<double>> probe(const Ladder& l, F&& fn) {
  std::vector<std::optional<double>> out;
  for (std::size_t k = 0; k < l.y.size(); ++k) {
    try {
      const double v = fn(k);
      out.push_back(std::isfinite(v) ? std::optional<double>(v) : std::nullopt);
    } catch (const Error&) {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& z, const std::vector<std::optional<double>>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    if (!v[k] || *v[k] == 0) return std::nullopt;
    const double x = std::log(z[k]), y = std::log(std::fabs(*v[k]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

bool all_zero(const std::vector<std::optional<double>>& v) {
  return std::all_of(v.begin(), v.end(), [](const auto& x) { return x && *x == 0.0; });
}

Evidence make_evidence(const std::string& condition, const Ladder& l, const std::vector<std::optional<double>>& v) {
  Evidence ev;
  ev.condition = condition;
  for (std::size_t k = 0; k < v.size(); ++k)
    ev.probes.emplace_back(l.y[k], v[k].value_or(std::numeric_limits<double>::quiet_NaN()));
  return ev;
}

Trend trend_evidence(const std::string& what, const Ladder& l, const std::vector<std::optional<double>>& v,
                     double tol, std::vector<Evidence>& out) {
  Evidence ev = make_evidence(what + " near the limit", l, v);
  Trend t = Trend::Undetermined;
  if (all_zero(v)) {
    t = Trend::Zero;
    ev.verdict = Verdict::Confirmed;
    ev.detail = "identically zero on the ladder";
  } else if (auto s = loglog_slope(l.z, v)) {
    ev.statistic = *s;
    t = *s > tol ? Trend::Zero : (*s < -tol ? Trend::Infinite : Trend::Constant);
    ev.verdict = Verdict::Confirmed;
    ev.detail = std::string("slope in z: ") + trend_text(t);
  } else {
    ev.verdict = Verdict::Undetermined;
    ev.detail = "probe failure or sign change on the ladder";
  }
  out.push_back(std::move(ev));
  return t;
}

/// Integrability of a probe family at z -> 0: converges iff the fitted
/// exponent exceeds -1 + tol.
std::optional<bool> integrable(const std::string& what, const Ladder& l, const std::vector<std::optional<double>>& v,
                               double tol, std::vector<Evidence>& out) {
  Evidence ev = make_evidence(what, l, v);
  std::optional<bool> result;
  if (all_zero(v)) {
    result = true;
    ev.verdict = Verdict::Confirmed;
    ev.detail = "integrand identically zero";
  } else if (auto s = loglog_slope(l.z, v)) {
    ev.statistic = *s;
    result = *s > -1.0 + tol;
    ev.verdict = Verdict::Confirmed;
    ev.detail = *result ? "converges" : "diverges";
  } else {
    ev.verdict = Verdict::Undetermined;
    ev.detail = "probe failure";
  }
  out.push_back(std::move(ev));
  return result;
}

int sgn(double x) { return (x > 0) - (x < 0); }

struct LimitGuess {
  bool infinite;
  double value;  // finite limit, or the sign of the infinite one
};

/// Follows the direction of motion from A_end on a geometric scan until the
/// rate changes sign (equilibrium), zero is crossed, or |A| exceeds A_max.
std::optional<LimitGuess> scan_limit(const ReducedSystem& rs, double A_end, int dir, double A_max) {
  const auto rate = [&](double y) { return dir * rs.amplitude_rate(y); };
  const double r0 = rate(A_end);
  if (r0 == 0) return LimitGuess{false, A_end};
  const int v = sgn(r0);
  const double scale = std::max(std::fabs(A_end), 1.0);
  double prev = A_end;
  for (int k = 0; k < 400; ++k) {
    const double y = A_end + v * scale * 1e-12 * std::ldexp(1.0, k);
    if (A_end != 0 && sgn(y) != sgn(A_end)) return LimitGuess{false, 0.0};
    if (std::fabs(y) > A_max) return LimitGuess{true, static_cast<double>(v)};
    const double r = rate(y);
    if (r == 0) return LimitGuess{false, y};
    if (sgn(r) != v) {
      double lo = prev, hi = y;
      for (int it = 0; it < 200 && lo != hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double rm = rate(mid);
        if (rm == 0) return LimitGuess{false, mid};
        (sgn(rm) == v ? lo : hi) = mid;
      }
      return LimitGuess{false, 0.5 * (lo + hi)};
    }
    prev = y;
  }
  return std::nullopt;
}

/// int_{A_end}^{limit} h(y) dy, mapped to z = 1/|y| for an infinite limit.
template <typename H>
std::optional<double> tail_integral(H&& h, double A_end, const LimitGuess& lim) {
  quad::Options qo;
  qo.tol = 1e-10;
  try {
    if (!lim.infinite) return quad::integrate(h, A_end, lim.value, qo).value;
    const double s = lim.value;
    auto mapped = [&](double z) { return h(s / z) * s / (z * z); };
    // y = s/z runs from A_end to s*inf as z goes from 1/|A_end| to 0.
    return quad::integrate(mapped, 0.0, 1.0 / std::fabs(A_end), qo).value;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

BehaviorReport classify_power_family(double p, double q, double kappa, double lambda, double t0, int direction,
                                     double X0) {
  if (p == 0 || q == 0 || kappa == 0 || lambda == 0)
    throw Error("power family requires non-zero p, q, kappa, lambda");
  BehaviorReport r;
  r.mode = "exact-power-family";
  r.direction = direction >= 0 ? 1 : -1;

  // Lifespan: s = p kappa (t - t0) > 0. Moving in `direction`, s grows without
  // bound iff direction * p * kappa > 0; otherwise s -> 0+ at t = t0.
  const bool s_to_inf = r.direction * p * kappa > 0;
  const bool finite_time = !s_to_inf;

  const double eA = -1.0 / p;
  const double eAdot = -(p + 1.0) / p;
  const double e1 = -q / p;
  const double e3 = -(1.0 + q / p);
  const Lim A = limit_of(eA, s_to_inf);
  const Lim Adot = limit_of(eAdot, s_to_inf);
  const Lim V = limit_of(e1, s_to_inf);
  const Lim Acc = limit_of(e3, s_to_inf);
  r.evidence.push_back(exponent_evidence("A", eA, s_to_inf));
  r.evidence.push_back(exponent_evidence("A'", eAdot, s_to_inf));
  r.evidence.push_back(exponent_evidence("X'", e1, s_to_inf));
  r.evidence.push_back(exponent_evidence("X''", e3, s_to_inf));

  bool X_bounded;
  if (q == p) {
    X_bounded = false;
    Evidence ev;
    ev.condition = "X - X0 ~ ln|t - t0|";
    ev.verdict = Verdict::Confirmed;
    ev.detail = "logarithmic branch: |X| -> inf";
    r.evidence.push_back(ev);
  } else {
    const double e2 = 1.0 - q / p;
    X_bounded = limit_of(e2, s_to_inf) == Lim::Zero;
    r.evidence.push_back(exponent_evidence("X - X0", e2, s_to_inf));
  }

  if (A == Lim::Inf) {
    r.amplitude = finite_time ? AmplitudeClass::BlowUp : AmplitudeClass::Unbounded;
    r.amplitude_value = kInf;
  } else {
    r.amplitude_value = 0.0;
    if (!finite_time) {
      r.amplitude = AmplitudeClass::Extinction;
      r.extinction = ExtinctionKind::Asymptotic;
    } else if (Adot == Lim::Zero) {
      r.amplitude = AmplitudeClass::Extinction;
      r.extinction = ExtinctionKind::FiniteTime;
    } else {
      r.amplitude = AmplitudeClass::SingularDerivative;
    }
  }
  if (finite_time) r.amplitude_time = t0;

  if (V == Lim::Inf) {
    if (X_bounded) {
      r.position = PositionClass::WheelspinLimit;
      r.position_value = X0;
    } else {
      r.position = finite_time ? PositionClass::FiniteTimeRunaway : PositionClass::Runaway;
    }
  } else if (Acc == Lim::Zero) {
    r.position = PositionClass::Braking;
    r.position_bounded = X_bounded;
    if (X_bounded) r.position_value = X0;
  } else {
    r.position = PositionClass::ThrustReverseBraking;
    r.position_bounded = X_bounded;
    if (X_bounded) r.position_value = X0;
  }
  if (finite_time) r.position_time = t0;

  if (r.direction > 0 && lambda > 0) {
    const auto prose = prose_position(p, q, kappa);
    std::ostringstream note;
    if (!prose) {
      note << "case text names no position behavior for p=" << p << ", q=" << q << ", kappa=" << kappa
           << "; label derived from the limits";
      r.notes.push_back(note.str());
    } else if (*prose != r.position) {
      note << "case text reads " << to_string(*prose) << " for p=" << p << ", q=" << q << ", kappa=" << kappa
           << "; the limits give " << to_string(r.position);
      r.notes.push_back(note.str());
    }
  }
  return r;
}

BehaviorReport classify_numeric(const ReducedSystem& rs, const PeakonState& init, double horizon,
                                const ClassifyOptions& opts) {
  BehaviorReport r;
  r.mode = "numeric";
  const double tol = opts.slope_tol;

  const Trajectory traj = integrate1(rs, init, horizon, opts.integrator);
  const int dir = traj.direction;
  r.direction = dir;
  for (const auto* e : traj.events_of(EventKind::DirectionReversal)) r.reversals.push_back(e->time);
  std::sort(r.reversals.begin(), r.reversals.end());
  if (traj.termination == Termination::DomainError) r.notes.push_back("simulation stopped early: " + traj.message);

  const TrajectorySample& last = traj.final_sample();
  const double A_end = last.A;

  {
    Evidence ev;
    ev.condition = "simulation to horizon";
    ev.probes.emplace_back(last.t, A_end);
    ev.verdict = Verdict::Consistent;
    ev.detail = "termination: " + to_string(traj.termination);
    r.evidence.push_back(ev);
  }

  // Rest state: the amplitude never moves.
  double rate0 = std::numeric_limits<double>::quiet_NaN();
  try {
    rate0 = rs.amplitude_rate(init.A);
  } catch (const Error&) {
  }
  if (!opts.integrator.oscillatory && std::fabs(rate0) <= opts.rest_tol * std::max(1.0, std::fabs(init.A))) {
    Evidence ev;
    ev.condition = "A f0(A0) = 0";
    ev.probes.emplace_back(init.A, rate0);
    ev.verdict = Verdict::Confirmed;
    r.evidence.push_back(ev);
    r.amplitude = AmplitudeClass::Constant;
    r.amplitude_value = init.A;
    r.position = PositionClass::ConstantSpeed;
    r.position_value = last.Xdot;
    Evidence sp;
    sp.condition = "X' = g0(A0)";
    sp.probes.emplace_back(init.A, last.Xdot);
    sp.verdict = Verdict::Confirmed;
    r.evidence.push_back(sp);
    return r;
  }

  // Oscillating amplitude: two or more turning points.
  const auto switches = traj.events_of(EventKind::BranchSwitch);
  if (opts.integrator.oscillatory && switches.size() >= 2) {
    Evidence ev;
    ev.condition = "amplitude turning points";
    for (const auto* e : switches) ev.probes.emplace_back(e->time, e->payload.at("A"));
    ev.verdict = Verdict::Confirmed;
    r.evidence.push_back(ev);
    r.amplitude = AmplitudeClass::Periodic;
    if (switches.size() >= 3) r.amplitude_value = std::fabs(switches[2]->time - switches[0]->time);
    double lo = kInf, hi = -kInf;
    for (const auto& s : traj.samples) {
      lo = std::min(lo, s.Xdot);
      hi = std::max(hi, s.Xdot);
    }
    Evidence sp;
    sp.condition = "X' range over the run";
    sp.probes = {{0.0, lo}, {1.0, hi}};
    if (hi - lo <= 1e-9 * std::max(1.0, std::fabs(hi))) {
      r.position = PositionClass::ConstantSpeed;
      r.position_value = last.Xdot;
      sp.verdict = Verdict::Confirmed;
    } else {
      sp.verdict = Verdict::Undetermined;
      sp.detail = "speed oscillates with the amplitude";
    }
    r.evidence.push_back(sp);
    return r;
  }

  // Locate the amplitude limit.
  std::optional<LimitGuess> lim;
  std::optional<double> event_time;
  bool singular = false;
  if (auto b = traj.events_of(EventKind::BlowUp); !b.empty()) {
    lim = LimitGuess{true, static_cast<double>(sgn(A_end))};
    event_time = b.front()->time;
  } else if (auto x = traj.events_of(EventKind::Extinction); !x.empty()) {
    lim = LimitGuess{false, 0.0};
    event_time = x.front()->time;
    singular = x.front()->payload.count("crossing") && x.front()->payload.at("crossing") == 1.0;
  } else {
    try {
      lim = scan_limit(rs, A_end, dir, opts.integrator.A_max);
    } catch (const Error&) {
      lim.reset();
    }
  }
  if (!lim) {
    r.notes.push_back("no amplitude limit found from the end state");
    return r;
  }
  {
    Evidence ev;
    ev.condition = "amplitude limit";
    ev.probes.emplace_back(A_end, lim->infinite ? lim->value * kInf : lim->value);
    ev.verdict = event_time ? Verdict::Confirmed : Verdict::Consistent;
    ev.detail = event_time ? "from a terminating event" : "from the rate scan past the end state";
    r.evidence.push_back(ev);
  }

  const double side = lim->infinite ? lim->value : (A_end == lim->value ? -dir : A_end - lim->value);
  const Ladder ladder = make_ladder(A_end, lim->value, lim->infinite, side, opts);
  const auto rate = probe(ladder, [&](std::size_t k) { return rs.amplitude_rate(ladder.y[k]); });
  const auto speed = probe(ladder, [&](std::size_t k) { return rs.g0_at(ladder.y[k]); });
  const auto accel = probe(ladder, [&](std::size_t k) { return rs.acceleration(ladder.y[k]); });
  std::vector<std::optional<double>> time_density, space_density;
  for (std::size_t k = 0; k < ladder.y.size(); ++k) {
    if (rate[k] && *rate[k] != 0)
      time_density.push_back(ladder.jac[k] / std::fabs(*rate[k]));
    else
      time_density.push_back(std::nullopt);
    if (rate[k] && speed[k] && *rate[k] != 0)
      space_density.push_back(ladder.jac[k] * std::fabs(*speed[k]) / std::fabs(*rate[k]));
    else if (speed[k] && *speed[k] == 0)
      space_density.push_back(0.0);
    else
      space_density.push_back(std::nullopt);
  }

  const Trend rate_trend = trend_evidence("A f0(A)", ladder, rate, tol, r.evidence);
  const auto finite_time = integrable("dA/(A f0(A)) integrable at the limit", ladder, time_density, tol, r.evidence);
  const Trend speed_trend = trend_evidence("g0(A)", ladder, speed, tol, r.evidence);
  const Trend accel_trend = trend_evidence("A f0(A) g0'(A)", ladder, accel, tol, r.evidence);
  const auto X_bounded = integrable("g0/(A f0) integrable at the limit", ladder, space_density, tol, r.evidence);

  auto tail_time = [&]() -> std::optional<double> {
    auto dt = tail_integral([&](double y) { return 1.0 / rs.amplitude_rate(y); }, A_end, *lim);
    if (!dt) return std::nullopt;
    return last.t + *dt;
  };

  // Amplitude class.
  if (lim->infinite) {
    r.amplitude_value = lim->value * kInf;
    if (finite_time && *finite_time) {
      r.amplitude = AmplitudeClass::BlowUp;
      r.amplitude_time = tail_time();
      if (!r.amplitude_time) r.amplitude_time = event_time;
    } else if (finite_time) {
      r.amplitude = AmplitudeClass::Unbounded;
    }
  } else if (lim->value == 0.0) {
    r.amplitude_value = 0.0;
    if (singular || rate_trend == Trend::Constant || rate_trend == Trend::Infinite) {
      r.amplitude = AmplitudeClass::SingularDerivative;
      r.amplitude_time = event_time ? event_time : tail_time();
    } else if (finite_time) {
      r.amplitude = AmplitudeClass::Extinction;
      if (*finite_time) {
        r.extinction = ExtinctionKind::FiniteTime;
        r.amplitude_time = tail_time();
        if (!r.amplitude_time) r.amplitude_time = event_time;
      } else {
        r.extinction = ExtinctionKind::Asymptotic;
        if (!event_time) r.notes.push_back("no extinction within horizon; the limit is approached asymptotically");
      }
    }
  } else {
    r.amplitude_value = lim->value;
    if (finite_time && !*finite_time) {
      r.amplitude = AmplitudeClass::FiniteAsymptote;
    } else if (finite_time) {
      r.notes.push_back("the equilibrium amplitude is reached in finite time (square-root turning point); "
                        "oscillatory mode continues through it");
    }
  }

  // Position class.
  const bool time_finite = finite_time.value_or(false);
  auto X_limit = [&]() -> std::optional<double> {
    auto dX = tail_integral(
        [&](double y) {
          const double g = rs.g0_at(y);
          return g == 0 ? 0.0 : g / rs.amplitude_rate(y);
        },
        A_end, *lim);
    if (!dX) return std::nullopt;
    return last.X + *dX;
  };
  if (all_zero(speed) && last.Xdot == 0.0) {
    r.position = PositionClass::ConstantSpeed;
    r.position_value = 0.0;
  } else if (speed_trend == Trend::Infinite && X_bounded) {
    if (*X_bounded) {
      r.position = PositionClass::WheelspinLimit;
      r.position_value = X_limit();
      r.notes.push_back("bounded position is certified by the probe ladder, not beyond the simulated horizon");
    } else {
      r.position = time_finite ? PositionClass::FiniteTimeRunaway : PositionClass::Runaway;
    }
    if (time_finite) r.position_time = r.amplitude_time;
  } else if (speed_trend == Trend::Zero && accel_trend != Trend::Undetermined && X_bounded) {
    r.position = accel_trend == Trend::Zero ? PositionClass::Braking : PositionClass::ThrustReverseBraking;
    r.position_bounded = *X_bounded;
    if (*X_bounded) r.position_value = X_limit();
    if (time_finite) r.position_time = r.amplitude_time;
  } else if (speed_trend == Trend::Constant) {
    r.position = PositionClass::FiniteAsymptoticSpeed;
    try {
      r.position_value = lim->infinite ? *speed.back() : rs.g0_at(lim->value);
    } catch (const Error&) {
      r.position_value = speed.back();
    }
  }
  return r;
}

std::optional<TravellingWaveLimit> asymptotic_travelling_wave_test(const ReducedSystem& rs,
                                                                   const BehaviorReport& report) {
  if (report.amplitude == AmplitudeClass::Constant && report.position == PositionClass::ConstantSpeed &&
      report.amplitude_value && report.position_value) {
    return TravellingWaveLimit{*report.amplitude_value, *report.position_value};
  }
  if (report.amplitude != AmplitudeClass::FiniteAsymptote || report.position != PositionClass::FiniteAsymptoticSpeed ||
      !report.amplitude_value || !report.position_value)
    return std::nullopt;
  // f0(u) = O(u - a): the rate A f0(A) vanishes at least linearly, and the
  // acceleration dies out.
  bool order_ok = false, accel_ok = false;
  for (const auto& ev : report.evidence) {
    if (ev.verdict != Verdict::Confirmed || !ev.statistic) continue;
    if (ev.condition == "A f0(A) near the limit") order_ok = *ev.statistic >= 1.0 - 0.1;
    if (ev.condition == "A f0(A) g0'(A) near the limit") accel_ok = *ev.statistic > 0.1;
  }
  if (!order_ok || !accel_ok) return std::nullopt;
  try {
    const double c = rs.g0_at(*report.amplitude_value);
    if (std::fabs(c - *report.position_value) > 1e-8 * std::max(1.0, std::fabs(c))) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  return TravellingWaveLimit{*report.amplitude_value, *report.position_value};
}

}  // namespace peakon
