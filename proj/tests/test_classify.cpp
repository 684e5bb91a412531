#include <cmath>

#include <gtest/gtest.h>

#include "peakon/analytic.hpp"
#include "peakon/classify.hpp"
#include "peakon/error.hpp"

using namespace peakon;

TEST(PowerFamily, Examples) {
  auto r = classify_power_family(1, 2, 1, 1, 0);
  EXPECT_EQ(r.amplitude, AmplitudeClass::Extinction);
  EXPECT_EQ(r.extinction, ExtinctionKind::Asymptotic);
  EXPECT_EQ(r.position, PositionClass::Braking);
  EXPECT_EQ(r.position_bounded, true);
  EXPECT_NEAR(*r.position_value, 0.0, 1e-15);

  r = classify_power_family(1, 1, -1, 1, 0);
  EXPECT_EQ(r.amplitude, AmplitudeClass::BlowUp);
  EXPECT_EQ(*r.amplitude_time, 0.0);
  EXPECT_EQ(r.position, PositionClass::FiniteTimeRunaway);

  r = classify_power_family(1, -1, 1, 1, 0);
  EXPECT_EQ(r.amplitude, AmplitudeClass::Extinction);
  EXPECT_EQ(r.position, PositionClass::Runaway);

  r = classify_power_family(1, 1, 1, 1, 0);
  EXPECT_EQ(r.position, PositionClass::Braking);
  EXPECT_EQ(r.position_bounded, false);
  EXPECT_EQ(r.mode, "exact-power-family");
}

TEST(PowerFamily, RejectsZeroParameters) {
  EXPECT_THROW(classify_power_family(0, 1, 1, 1, 0), Error);
  EXPECT_THROW(classify_power_family(1, 0, 1, 1, 0), Error);
  EXPECT_THROW(classify_power_family(1, 1, 0, 1, 0), Error);
  EXPECT_THROW(classify_power_family(1, 1, 1, 0, 0), Error);
}

// q = -p with s -> 0+: X' = lam s vanishes while X'' = -q kappa lam stays put.
TEST(PowerFamily, ThrustReverseBraking) {
  const auto r = classify_power_family(1, -1, -1, 1, 0);
  EXPECT_EQ(r.amplitude, AmplitudeClass::BlowUp);
  EXPECT_EQ(r.position, PositionClass::ThrustReverseBraking);
  const auto e = make_entry(CatalogId::PowerFamily, {{"p", 1}, {"q", -1}, {"k", -1}, {"lam", 1}, {"t0", 1}});
  ReducedSystem rs(e.spec);
  const auto n = classify_numeric(rs, exact_state(e, 0), 5);
  EXPECT_EQ(n.position, PositionClass::ThrustReverseBraking);
}

TEST(Numeric, Ex2BothDirections) {
  const auto e = make_entry(CatalogId::AsymptoticEx2);
  ReducedSystem rs(e.spec);
  const auto f = classify_numeric(rs, exact_state(e, 0), 20);
  EXPECT_EQ(f.amplitude, AmplitudeClass::FiniteAsymptote);
  EXPECT_NEAR(*f.amplitude_value, 2.0, 1e-6);
  EXPECT_EQ(f.position, PositionClass::FiniteAsymptoticSpeed);
  EXPECT_NEAR(*f.position_value, 2.0, 1e-6);
  const auto b = classify_numeric(rs, exact_state(e, 0), -20);
  EXPECT_EQ(b.amplitude, AmplitudeClass::FiniteAsymptote);
  EXPECT_NEAR(*b.amplitude_value, 1.0, 1e-6);
  EXPECT_EQ(b.position, PositionClass::FiniteAsymptoticSpeed);
  EXPECT_NEAR(*b.position_value, 1.0, 1e-6);
  EXPECT_EQ(b.direction, -1);

  const auto tw = asymptotic_travelling_wave_test(rs, f);
  ASSERT_TRUE(tw);
  EXPECT_NEAR(tw->a, 2.0, 1e-6);
  EXPECT_NEAR(tw->c, 2.0, 1e-6);
}

TEST(Numeric, Ex5Smooth) {
  const auto e = make_entry(CatalogId::DissipatingEx5);
  ReducedSystem rs(e.spec);
  const auto r = classify_numeric(rs, exact_state(e, 0), 20);
  EXPECT_EQ(r.amplitude, AmplitudeClass::Extinction);
  EXPECT_EQ(r.extinction, ExtinctionKind::Asymptotic);
  EXPECT_EQ(r.position, PositionClass::Braking);
  EXPECT_NEAR(*r.position_value, std::log(2.0), 1e-4);
  EXPECT_FALSE(asymptotic_travelling_wave_test(rs, r));
}

TEST(Numeric, CamassaHolm) {
  ReducedSystem rs(make_spec("ux", "u"));
  const auto r = classify_numeric(rs, {0, 1.7, 0}, 10);
  EXPECT_EQ(r.amplitude, AmplitudeClass::Constant);
  EXPECT_EQ(r.position, PositionClass::ConstantSpeed);
  const auto tw = asymptotic_travelling_wave_test(rs, r);
  ASSERT_TRUE(tw);
  EXPECT_NEAR(tw->a, 1.7, 1e-12);
  EXPECT_NEAR(tw->c, 1.7, 1e-9);
}

TEST(Numeric, Ex3Reversal) {
  const auto e = make_entry(CatalogId::ReversingEx3);
  ReducedSystem rs(e.spec);
  const auto r = classify_numeric(rs, exact_state(e, -6), 20);
  ASSERT_EQ(r.reversals.size(), 1u);
  EXPECT_NEAR(r.reversals[0], -std::log(std::sqrt(3.0)), 1e-3);
  EXPECT_EQ(r.position, PositionClass::FiniteAsymptoticSpeed);
  EXPECT_NEAR(*r.position_value, -1.0, 1e-6);
  const auto b = classify_numeric(rs, exact_state(e, 6), -20);
  EXPECT_NEAR(*b.position_value, 1.0, 1e-6);
}

TEST(Numeric, BlowUp) {
  const auto e = make_entry(CatalogId::BlowupEx5);
  ReducedSystem rs(e.spec);
  const auto r = classify_numeric(rs, exact_state(e, 0), 5);
  EXPECT_EQ(r.amplitude, AmplitudeClass::BlowUp);
  EXPECT_NEAR(*r.amplitude_time, 1.0, 1e-3);
  EXPECT_FALSE(r.extinction.has_value());
}

TEST(Numeric, Breather) {
  ClassifyOptions o;
  o.integrator.oscillatory = true;
  ReducedSystem rs(design_breather(1, 2, 0));
  const auto r = classify_numeric(rs, {0, 1, 0}, 10, o);
  EXPECT_EQ(r.amplitude, AmplitudeClass::Periodic);
}

// Grid over p in {1, 2, -1}, q in {-1, 1, 2}, kappa in {1, -1}, lambda = 1.
TEST(Property, ExactNumericAgreement) {
  for (double p : {1.0, 2.0, -1.0})
    for (double q : {-1.0, 1.0, 2.0})
      for (double k : {1.0, -1.0}) {
        const double t0 = -1 / (p * k);  // A(0) = 1
        const auto e = make_entry(CatalogId::PowerFamily, {{"p", p}, {"q", q}, {"k", k}, {"lam", 1}, {"t0", t0}});
        ReducedSystem rs(e.spec);
        const auto exact = classify_power_family(p, q, k, 1, t0);
        const auto numeric = classify_numeric(rs, exact_state(e, 0), 20);
        EXPECT_EQ(exact.amplitude, numeric.amplitude) << "p=" << p << " q=" << q << " k=" << k;
        EXPECT_EQ(exact.position, numeric.position) << "p=" << p << " q=" << q << " k=" << k;
      }
}

TEST(Property, EvidenceDiscipline) {
  std::vector<BehaviorReport> reports;
  for (double p : {1.0, -1.0})
    for (double q : {-1.0, 2.0}) reports.push_back(classify_power_family(p, q, 1, 1, 0));
  const auto e = make_entry(CatalogId::AsymptoticEx2);
  ReducedSystem rs(e.spec);
  reports.push_back(classify_numeric(rs, exact_state(e, 0), 20));
  for (const auto& r : reports) {
    EXPECT_FALSE(r.evidence.empty());
    EXPECT_FALSE(r.amplitude == AmplitudeClass::BlowUp && r.extinction.has_value());
    for (const auto& ev : r.evidence) {
      EXPECT_FALSE(ev.condition.empty());
      if (ev.verdict == Verdict::Confirmed && r.mode == "numeric") EXPECT_FALSE(ev.probes.empty()) << ev.condition;
    }
  }
}

// Re-fitting the recorded probes reproduces the recorded slope. Probe
// abscissae are amplitudes; the fit runs in the distance to the limit.
TEST(Property, ProbesReproduceStatistic) {
  const auto e = make_entry(CatalogId::AsymptoticEx2);
  ReducedSystem rs(e.spec);
  const auto r = classify_numeric(rs, exact_state(e, 0), 20);
  int checked = 0;
  for (const auto& ev : r.evidence) {
    if (ev.probes.size() < 3 || !ev.statistic) continue;
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool usable = true;
    for (const auto& [y, v] : ev.probes) {
      const double z = std::fabs(y - *r.amplitude_value);
      if (!(z > 0) || v == 0 || !std::isfinite(v)) usable = false;
      const double lx = std::log(z), ly = std::log(std::fabs(v));
      n += 1, sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    if (!usable) continue;
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_NEAR(slope, *ev.statistic, 1e-3) << ev.condition;
    ++checked;
  }
  EXPECT_GT(checked, 0);
}
