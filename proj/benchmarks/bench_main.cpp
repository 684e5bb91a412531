#include <cmath>

#include <benchmark/benchmark.h>

#include "peakon/analytic.hpp"
#include "peakon/npeakon.hpp"
#include "peakon/quadrature.hpp"

using namespace peakon;

static void BM_Quadrature(benchmark::State& state) {
  for (auto _ : state) {
    auto r = quad::integrate([](double y) { return std::exp(y) * std::cos(3 * y); }, -2.0, 2.0);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_Quadrature);

// Uncached reduced-function evaluation at a moving amplitude.
static void BM_ReduceF0G0(benchmark::State& state) {
  ReduceOptions o;
  o.use_cache = false;
  ReducedSystem rs(make_spec("k*(u-2)*(u-1) + ux^2*u", "u^2 - 0.5*ux^2"), o);
  double A = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rs.f0_at(A) + rs.g0_at(A));
    A = A < 3 ? A + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_ReduceF0G0);

static void BM_Integrate1Ex2(benchmark::State& state) {
  const auto e = make_entry(CatalogId::AsymptoticEx2);
  for (auto _ : state) {
    ReducedSystem rs(e.spec);
    auto tr = integrate1(rs, exact_state(e, 0), 10);
    benchmark::DoNotOptimize(tr.samples.back().A);
  }
}
BENCHMARK(BM_Integrate1Ex2)->Unit(benchmark::kMillisecond);

static void BM_RhsN(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ReduceOptions o;
  o.use_cache = false;
  ReducedSystem rs(make_spec("ux", "u"), o);
  NPeakonState s;
  for (std::size_t i = 0; i < n; ++i) {
    s.a.push_back(1.0 / (1 + i));
    s.x.push_back(2.0 * i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(rhsN(rs, s).xdot[0]);
}
BENCHMARK(BM_RhsN)->Arg(2)->Arg(8)->Arg(32);
BENCHMARK_MAIN();
