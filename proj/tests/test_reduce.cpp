#include <cmath>

#include <gtest/gtest.h>

#include "peakon/error.hpp"
#include "peakon/reduce.hpp"
#include "support.hpp"

using namespace peakon;

TEST(Antiderivative, Examples) {
  ReducedSystem ch(make_spec("ux", "u"));
  EXPECT_NEAR(ch.antiderivative_at(Which::F, 0.3, 3), 4.5, 1e-12);
  EXPECT_NEAR(ch.antiderivative_at(Which::G, 2, 3), 6.0, 1e-12);
  ReducedSystem pw(make_spec("k*u^p", "u", {{"k", 2}, {"p", 1}}));
  EXPECT_NEAR(pw.antiderivative_at(Which::F, 2, -2), -8.0, 1e-12);
}

TEST(F0, Examples) {
  ReducedSystem a(make_spec("k*u^p", "u", {{"k", 2}, {"p", 2}}));
  EXPECT_NEAR(a.f0_at(1.5), 4.5, 1e-10);
  ReducedSystem ch(make_spec("ux", "u"));
  for (double A : {-2.0, 0.5, 3.0}) EXPECT_NEAR(ch.f0_at(A), 0.0, 1e-12);
  ReducedSystem ex5(make_spec("k*(a-u)", "lam*u", {{"k", 1}, {"a", 1}, {"lam", 1}}));
  EXPECT_NEAR(ex5.f0_at(0.25), 0.75, 1e-12);
}

TEST(G0, Examples) {
  ReducedSystem ch(make_spec("ux", "u"));
  for (double a : {0.5, 1.0, 2.0}) EXPECT_NEAR(ch.g0_at(a), a, 1e-9);
  ReducedSystem mch(make_spec("0", "u^2 - ux^2"));
  EXPECT_NEAR(mch.g0_at(2), 8.0 / 3.0, 1e-10);
  ReducedSystem st(make_spec("u", "lam*u^q*ux", {{"lam", 1.3}, {"q", 2}}));
  for (double A : {0.5, 1.0, 2.0}) EXPECT_NEAR(st.g0_at(A), 0.0, 1e-12);
}

TEST(Alpha, Examples) {
  ReducedSystem a(make_spec("u", "lam*u", {{"lam", 3}}));
  EXPECT_NEAR(a.alpha_at(0.7), 3.0, 1e-10);
  ReducedSystem b(make_spec("u", "lam*(3-2*u)", {{"lam", 1}}));
  EXPECT_NEAR(b.alpha_at(1.2), -2.0, 1e-10);
  ReducedSystem c(make_spec("u", "u^2"));
  EXPECT_NEAR(c.alpha_at(1.5), 3.0, 1e-8);
}

TEST(Kind, Examples) {
  EXPECT_EQ(classify_peakon_kind(ReducedSystem(make_spec("ux", "u"))).kind, PeakonKind::TravellingWave);
  EXPECT_EQ(classify_peakon_kind(ReducedSystem(make_spec("k*(u-2)*(u-1)", "lam*u", {{"k", 1}, {"lam", 1}}))).kind,
            PeakonKind::DynamicalAccelerating);
  const auto st = classify_peakon_kind(ReducedSystem(make_spec("k*u^p", "lam*u^q*ux", {{"k", 1}, {"lam", 1}, {"p", 1}, {"q", 1}})));
  EXPECT_EQ(st.kind, PeakonKind::DynamicalConstantSpeed);
  EXPECT_EQ(classify_peakon_kind(ReducedSystem(make_spec("ux", "ux"))).kind, PeakonKind::Stationary);
}

TEST(Kind, FailedSamplesAreRecorded) {
  // log(u) is undefined for negative amplitudes; those samples are skipped.
  const auto r = classify_peakon_kind(ReducedSystem(make_spec("log(u)", "u")));
  int failed = 0;
  for (const auto& s : r.samples) failed += !s.failure.empty();
  EXPECT_EQ(failed, 4);
  EXPECT_EQ(r.kind, PeakonKind::DynamicalAccelerating);
}

TEST(Property, CalibrationCH) {
  ReducedSystem ch(make_spec("ux", "u"));
  for (double a : {0.5, 1.0, 2.0}) EXPECT_NEAR(ch.g0_at(a), a, 1e-9);
}

TEST(Property, SpeedLawAndKappaIndependence) {
  for (double p : {0.0, 1.0, 2.0, 3.0})
    for (double lam : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
      ReducedSystem r1(make_spec("k*u^p*ux", "u^(p-1)*(u^2+lam*ux^2)", {{"k", 1}, {"p", p}, {"lam", lam}}));
      ReducedSystem r2(make_spec("k*u^p*ux", "u^(p-1)*(u^2+lam*ux^2)", {{"k", -4.5}, {"p", p}, {"lam", lam}}));
      for (double a : {0.5, 1.0, 2.0}) {
        const double expect = (1 + lam / 3) * std::pow(a, p + 1);
        EXPECT_NEAR(r1.g0_at(a), expect, 1e-8);
        if (lam == -3.0) EXPECT_LT(std::fabs(r1.g0_at(a)), 1e-9);
        EXPECT_NEAR(r1.g0_at(a), r2.g0_at(a), 1e-9);
        EXPECT_NEAR(r1.f0_at(a), r2.f0_at(a), 1e-9);
      }
    }
}

TEST(Property, OddFGivesZeroF0) {
  for (const char* f : {"ux", "u*ux", "ux^3 + sin(ux)*u", "k*u^2*ux"}) {
    ReducedSystem rs(make_spec(f, "u", {{"k", 2}}));
    for (double A : {-4.0, -1.0, 0.5, 2.0, 4.0}) EXPECT_LT(std::fabs(rs.f0_at(A)), 1e-9) << f;
  }
}

TEST(Property, SplitDomainAgrees) {
  for (const char* f : {"u^2 + ux", "exp(ux)*u", "k*(u-2)*(u-1) + ux^2"}) {
    ReducedSystem rs(make_spec(f, "u", {{"k", 1}}));
    for (double A : {0.3, 1.0, 2.5}) EXPECT_NEAR(rs.f0_at(A), rs.f0_split(A), 10 * rs.options().quad_tol * std::max(1.0, std::fabs(rs.f0_at(A))));
  }
}

TEST(Property, CacheDoesNotChangeResults) {
  ReduceOptions off;
  off.use_cache = false;
  const auto spec = make_spec("exp(ux)*u^2", "u^2 - 0.3*ux^2 + ux");
  ReducedSystem cached(spec), plain(spec, off);
  for (double A : {0.1, 0.7, 1.3, 2.9}) {
    for (int rep = 0; rep < 2; ++rep) {
      EXPECT_EQ(cached.f0_at(A), plain.f0_at(A));
      EXPECT_EQ(cached.g0_at(A), plain.g0_at(A));
      EXPECT_EQ(cached.alpha_at(A), plain.alpha_at(A));
    }
  }
  EXPECT_GT(cached.cache_size(), 0u);
  EXPECT_EQ(plain.cache_size(), 0u);
}

TEST(Property, AlphaMatchesHalfStepDifference) {
  for (const char* g : {"u^2 - ux^2", "exp(u)*cos(ux)", "abs(ux)*u^3"}) {
    ReducedSystem rs(make_spec("u", g));
    for (double A : {0.5, 1.0, 1.7}) {
      const double h = 0.5 * rs.options().deriv_step_scale * std::max(1.0, std::fabs(A));
      EXPECT_NEAR(rs.alpha_at(A), rs.alpha_numeric(A, h), 1e-6) << g << " A=" << A;
    }
  }
}

TEST(Oracle, ReducedValuesMatchSimpson) {
  const auto h = [](double u, double y) { return std::exp(y) * u * u + y * y; };
  ReducedSystem rs(make_spec("exp(ux)*u^2 + ux^2", "u"));
  for (double A : {0.4, 1.1, 2.2})
    EXPECT_NEAR(rs.f0_at(A), oracle::reduced_by_simpson(h, A), 1e-9 * std::max(1.0, rs.f0_at(A)));
}

TEST(Origin, FiniteLimitAndSingularity) {
  ReducedSystem fine(make_spec("u + ux^2", "2 + u"));
  EXPECT_NEAR(fine.f0_at(0.0), 0.0, 1e-6);
  EXPECT_NEAR(fine.g0_at(0.0), 2.0, 1e-6);
  ReducedSystem sing(make_spec("u^(-1)", "u"));
  EXPECT_THROW(sing.f0_at(0.0), SingularOriginError);
}
