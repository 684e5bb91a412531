// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed
// here and printed with the measured values.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "golden.hpp"
#include "peakon/analytic.hpp"
#include "peakon/classify.hpp"
#include "peakon/error.hpp"
#include "peakon/npeakon.hpp"
#include "peakon/verify.hpp"
#include "support.hpp"

using namespace peakon;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records `value <= limit` and appends it to the detail text.
  void le(const std::string& what, double value, double limit) {
    const bool ok = value <= limit;
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g%s%.0e", detail.empty() ? "" : "; ", what.c_str(), value,
                  ok ? "<=" : ">", limit);
    detail += buf;
  }
  void require(const std::string& what, bool ok) {
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? " ok" : " FAILED");
  }
};

double max_abs_diff(const Trajectory& tr, const CatalogEntry& e, bool position) {
  double worst = 0;
  for (const auto& s : tr.samples) {
    const auto cf = closed_form(e, s.t);
    worst = std::max(worst, std::fabs(position ? s.X - cf.X : s.A - cf.A));
  }
  return worst;
}

// Classical speed-amplitude relations.
Outcome criterion1() {
  Outcome o;
  struct Eq {
    const char* name;
    const char* f;
    const char* g;
    std::function<double(double)> c;
  };
  const Eq eqs[] = {
      {"CH", "ux", "u", [](double a) { return a; }},
      {"DP", "2*ux", "u", [](double a) { return a; }},
      {"Novikov", "u*ux", "u^2", [](double a) { return a * a; }},
      {"mCH", "0", "u^2 - ux^2", [](double a) { return 2.0 / 3.0 * a * a; }},
  };
  double adot = 0, speed = 0;
  for (const auto& eq : eqs) {
    ReducedSystem rs(make_spec(eq.f, eq.g));
    for (double a : {0.5, 1.0, 2.0}) {
      const auto tr = integrate1(rs, {0, a, 0}, 5);
      for (const auto& s : tr.samples) {
        adot = std::max(adot, std::fabs(rhs1(rs, {s.t, s.A, s.X}).Adot));
        adot = std::max(adot, std::fabs(s.A - a) / 5);
        speed = std::max(speed, std::fabs(s.Xdot - eq.c(a)));
      }
    }
  }
  o.le("max|Adot|", adot, 1e-9);
  o.le("max|Xdot-c|", speed, 1e-8);
  return o;
}

// Speed law of the travelling-wave family and kappa-independence.
Outcome criterion2() {
  Outcome o;
  double law = 0, degenerate = 0, kappa = 0;
  for (double p : {0.0, 1.0, 2.0, 3.0})
    for (double lam : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
      const auto base = make_entry(CatalogId::TravellingEx1, {{"p", p}, {"lam", lam}});
      ReducedSystem rs(base.spec);
      for (double a : {0.5, 1.0, 2.0}) {
        const double g0 = rs.g0_at(a);
        law = std::max(law, std::fabs(g0 - (1 + lam / 3) * std::pow(a, p + 1)));
        if (lam == -3.0) degenerate = std::max(degenerate, std::fabs(g0));
        for (double k : {-2.0, 0.5, 7.0}) {
          ReducedSystem rk(make_entry(CatalogId::TravellingEx1, {{"p", p}, {"lam", lam}, {"k", k}}).spec);
          kappa = std::max(kappa, std::fabs(rk.g0_at(a) - g0));
        }
      }
    }
  o.le("speed-law error", law, 1e-8);
  o.le("|g0| at lam=-3", degenerate, 1e-9);
  o.le("kappa sensitivity", kappa, 1e-9);
  return o;
}

// Asymptotic travelling waves: closed forms and fitted asymptotes. Both halves
// start at t = 0 and run toward the attracting end states.
Outcome criterion3() {
  Outcome o;
  const auto e = make_entry(CatalogId::AsymptoticEx2);
  ReducedSystem rs(e.spec);
  const auto fwd = integrate1(rs, exact_state(e, 0), 10);
  const auto bwd = integrate1(rs, exact_state(e, 0), -10);
  o.le("A error", std::max(max_abs_diff(fwd, e, false), max_abs_diff(bwd, e, false)), 1e-6);
  o.le("X error", std::max(max_abs_diff(fwd, e, true), max_abs_diff(bwd, e, true)), 1e-6);
  const auto rf = classify_numeric(rs, exact_state(e, 0), 20);
  const auto rb = classify_numeric(rs, exact_state(e, 0), -20);
  const double lam = e.param("lam");
  const bool have = rf.amplitude_value && rf.position_value && rb.amplitude_value && rb.position_value;
  o.require("asymptotes found", have);
  if (have) {
    o.le("|a- - 1|", std::fabs(*rb.amplitude_value - 1), 1e-3);
    o.le("|a+ - 2|", std::fabs(*rf.amplitude_value - 2), 1e-3);
    o.le("|c- - lam|", std::fabs(*rb.position_value - lam), 1e-3);
    o.le("|c+ - 2lam|", std::fabs(*rf.position_value - 2 * lam), 1e-3);
  }
  return o;
}

// Direction reversal.
Outcome criterion4() {
  Outcome o;
  const auto e = make_entry(CatalogId::ReversingEx3);
  ReducedSystem rs(e.spec);
  const auto tr = integrate1(rs, exact_state(e, -6), 6);
  const auto rev = tr.events_of(EventKind::DirectionReversal);
  o.require("single reversal", rev.size() == 1);
  if (rev.size() == 1) {
    const double k = e.param("k"), lam = e.param("lam"), ln = std::log(std::sqrt(3.0));
    o.le("|t* - expected|", std::fabs(rev[0]->time + ln / k), 1e-4);
    o.le("|X* - expected|", std::fabs(rev[0]->payload.at("X") + 3 * lam / k * ln), 1e-3);
  }
  return o;
}

// Dissipating and blow-up branches.
Outcome criterion5() {
  Outcome o;
  const auto smooth = make_entry(CatalogId::DissipatingEx5);
  ReducedSystem rs(smooth.spec);
  const auto tr = integrate1(rs, exact_state(smooth, 0), 20);
  const auto& end = tr.final_sample();
  o.require("reached t=20", end.t == 20.0);
  o.le("A(20)", std::fabs(end.A), 1e-6);
  o.le("|X(20) - X0 - ln2|", std::fabs(end.X - smooth.param("X0") - std::log(2.0)), 1e-4);
  const auto blow = make_entry(CatalogId::BlowupEx5);
  ReducedSystem rb(blow.spec);
  const auto tb = integrate1(rb, exact_state(blow, 0), 5);
  const auto ev = tb.events_of(EventKind::BlowUp);
  o.require("blow-up event", ev.size() == 1);
  if (ev.size() == 1) o.le("|t* - t0|", std::fabs(ev[0]->time - blow.param("t0")), 1e-3);
  return o;
}

// Power family: closed form and exact/numeric classification agreement.
Outcome criterion6() {
  Outcome o;
  double err = 0;
  int mismatches = 0, cases = 0;
  for (double p : {1.0, 2.0, -1.0})
    for (double q : {-1.0, 1.0, 2.0})
      for (double k : {1.0, -1.0}) {
        const double t0 = -1 / (p * k);
        const auto e = make_entry(CatalogId::PowerFamily, {{"p", p}, {"q", q}, {"k", k}, {"lam", 1}, {"t0", t0}});
        ReducedSystem rs(e.spec);
        // Stay 0.1 / |p k| inside a finite domain end.
        const double margin = 0.1 / std::fabs(p * k);
        const double hi = std::isfinite(e.domain.hi) ? e.domain.hi - margin : 10;
        const double lo = std::isfinite(e.domain.lo) ? e.domain.lo + margin : -10;
        for (double h : {hi, lo}) {
          const auto tr = integrate1(rs, exact_state(e, 0), h);
          err = std::max({err, max_abs_diff(tr, e, false), max_abs_diff(tr, e, true)});
        }
        const auto exact = classify_power_family(p, q, k, 1, t0);
        const auto numeric = classify_numeric(rs, exact_state(e, 0), 20);
        ++cases;
        if (exact.amplitude != numeric.amplitude || exact.position != numeric.position) ++mismatches;
      }
  o.le("closed-form error", err, 1e-6);
  o.require(std::to_string(cases) + " classification cases agree", mismatches == 0 && cases >= 9);
  return o;
}

// N = 1 reduction of the multi-peakon system.
Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-1.0, 1.0), amp(0.2, 2.5), pos(-3.0, 3.0);
  const char* fs[] = {"c1*u + c2*ux + c3*u*ux^2", "c1*u^2 + c2*exp(ux)", "c1 + c2*ux^3 + c3*u*ux", "k*(u-2)*(u-1)"};
  const char* gs[] = {"c3*u + c1*ux^2", "u^2 - c2*ux^2 + c3*ux", "c1*exp(u) + c2*ux", "u^2*cos(ux)"};
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const ParamMap p{{"c1", c(rng)}, {"c2", c(rng)}, {"c3", c(rng)}, {"k", c(rng)}};
    ReducedSystem rs(make_spec(fs[i % 4], gs[(i / 4) % 4], p));
    const double A = amp(rng) * (i % 5 == 0 ? -1 : 1), X = pos(rng);
    const auto one = rhs1(rs, {0, A, X});
    const auto n = rhsN(rs, {0, {A}, {X}});
    worst = std::max({worst, std::fabs(n.adot[0] - one.Adot), std::fabs(n.xdot[0] - one.Xdot)});
  }
  o.le("max|rhsN - rhs1|", worst, 1e-8);
  return o;
}

// Camassa-Holm multi-peakon conservation and hand-derived rates.
Outcome criterion8() {
  Outcome o;
  ReducedSystem ch(make_spec("ux", "u"));
  const auto tr = integrateN(ch, {0, {1, 0.5, 0.25}, {-5, 0, 5}}, 20);
  o.require("horizon reached", tr.termination == Termination::HorizonReached);
  double sum0 = 0, sum_drift = 0;
  for (double a : tr.samples.front().a) sum0 += a;
  for (const auto& s : tr.samples) {
    double sum = 0;
    for (double a : s.a) sum += a;
    sum_drift = std::max(sum_drift, std::fabs(sum - sum0));
  }
  o.le("sum a drift", sum_drift, 1e-8);
  o.le("H1 drift", functional_drift(functionals(tr)).H1, 1e-6);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> amp(-2.0, 2.0), pos(-4.0, 4.0);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    NPeakonState s;
    for (int i = 0; i < 2 + trial % 3; ++i) {
      const double a = amp(rng);
      s.a.push_back(std::fabs(a) < 0.1 ? 0.5 : a);
      s.x.push_back(pos(rng));
    }
    std::vector<double> adot, xdot;
    oracle::ch_rates(s.a, s.x, adot, xdot);
    const auto r = rhsN(ch, s);
    for (std::size_t i = 0; i < s.size(); ++i)
      worst = std::max({worst, std::fabs(r.adot[i] - adot[i]), std::fabs(r.xdot[i] - xdot[i])});
  }
  o.le("CH rate error", worst, 1e-10);
  return o;
}

// Breathers.
Outcome criterion9() {
  Outcome o;
  IntegratorOptions io;
  io.oscillatory = true;
  ReducedSystem still(design_breather(1, 2, 0));
  const double two_periods = 2 * (2 * std::numbers::pi / 2);
  const auto tr = integrate1(still, {0, 1, 0}, two_periods, io);
  o.require("two periods", tr.final_sample().t == two_periods);
  double err = 0;
  for (const auto& s : tr.samples) err = std::max(err, std::fabs(s.A - std::cos(2 * s.t)));
  o.le("max|A - cos 2t|", err, 1e-4);
  ReducedSystem moving(design_breather(1, 2, 3));
  const auto tm = integrate1(moving, {0, 1, 0}, two_periods, io);
  double lo = 1e300, hi = -1e300;
  for (const auto& s : tm.samples) {
    lo = std::min(lo, s.X - 3 * s.t);
    hi = std::max(hi, s.X - 3 * s.t);
  }
  o.le("spread of X - 3t", hi - lo, 1e-6);
  return o;
}

// The factor 1/2 in the reduction. Without it the CH peakon would travel at
// twice its amplitude.
Outcome criterion10() {
  Outcome o;
  ReducedSystem ch(make_spec("ux", "u"));
  double corrected = 0, uncorrected = 1e300;
  for (double a : {0.5, 1.0, 2.0}) {
    corrected = std::max(corrected, std::fabs(ch.g0_at(a) - a));
    // (1/A) int_{-A}^{A} g dy, straight from the antiderivative.
    const double doubled = ch.slope_integral(Which::G, a, -a, a) / a;
    uncorrected = std::min(uncorrected, std::fabs(doubled - a));
  }
  o.le("|g0 - a|", corrected, 1e-9);
  o.require("doubled g0 misses c=a by " + std::to_string(uncorrected), uncorrected > 0.1);
  return o;
}

// Verification of every catalog trajectory.
Outcome criterion11() {
  Outcome o;
  double ode = 0, identity = 0, order_dev = 0;
  int failed = 0;
  for (CatalogId id : all_catalog_ids()) {
    const auto e = make_entry(id);
    ReducedSystem rs(e.spec);
    IntegratorOptions io;
    VerifyOptions vo;
    double lo = -5, hi = 5;
    switch (id) {
      case CatalogId::PowerFamily:
      case CatalogId::StationaryFamily: lo = 1, hi = 6; break;
      case CatalogId::BlowupEx5: hi = e.param("t0") - 0.2, io.sample_dt = 0.001; break;
      case CatalogId::Breather: lo = 0, hi = 2 * std::numbers::pi, io.oscillatory = vo.oscillatory = true; break;
      default: break;
    }
    const auto tr = integrate1(rs, exact_state(e, lo), hi, io);
    const auto rep = verify_trajectory(rs, tr, vo);
    ode = std::max(ode, rep.max_ode_residual);
    identity = std::max(identity, rep.functional_identity);
    if (rep.offpeak_residual > 0) order_dev = std::max(order_dev, std::fabs(rep.offpeak_order - 2));
    failed += !rep.passed();
  }
  o.le("max ODE residual", ode, 1e-5);
  o.le("functional identity", identity, 1e-12);
  o.le("|off-peak order - 2|", order_dev, 0.2);
  o.require("all reports pass", failed == 0);
  return o;
}

// Parser golden cases and print/parse round trip.
Outcome criterion12() {
  Outcome o;
  int accepted = 0, offsets = 0;
  for (const auto& g : golden::kAccept) {
    const auto r = try_parse_expr(g.text);
    accepted += r && r.expr->to_string() == g.printed;
  }
  for (const auto& g : golden::kReject) {
    const auto r = try_parse_expr(g.text);
    offsets += !r && r.offset == g.offset;
  }
  o.require(std::to_string(accepted) + "/10 accepted", accepted == 10);
  o.require(std::to_string(offsets) + "/6 rejected at offset", offsets == 6);
  ParamMap params;
  for (std::size_t i = 0; i < 4; ++i) params[golden::kParamNames[i]] = golden::kParamValues[i];
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(0.2, 3.0), UX(-3.0, 3.0);
  int mismatches = 0;
  for (const auto& g : golden::kAccept) {
    const Expr e = parse_expr(g.text), back = parse_expr(e.to_string());
    for (int i = 0; i < 100; ++i) {
      const double u = U(rng), ux = UX(rng);
      double v1 = 0, v2 = 0;
      bool t1 = false, t2 = false;
      try { v1 = e.eval(u, ux, params); } catch (const EvalError&) { t1 = true; }
      try { v2 = back.eval(u, ux, params); } catch (const EvalError&) { t2 = true; }
      mismatches += t1 != t2 || (!t1 && v1 != v2);
    }
  }
  o.require("round trip at 100 points", mismatches == 0);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"speed-amplitude relations", criterion1},
      {"travelling-wave speed law", criterion2},
      {"asymptotic travelling wave", criterion3},
      {"direction reversal", criterion4},
      {"dissipation and blow-up", criterion5},
      {"power family", criterion6},
      {"single-peakon reduction", criterion7},
      {"CH multi-peakon conservation", criterion8},
      {"breathers", criterion9},
      {"reduction factor", criterion10},
      {"verification suite", criterion11},
      {"expression parser", criterion12},
  };
  int failures = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    failures += !out.pass;
    std::printf("%s %2d %s: %s\n", out.pass ? "PASS" : "FAIL", n, name, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
