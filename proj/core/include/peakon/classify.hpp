#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "peakon/reduce.hpp"
#include "peakon/single.hpp"

namespace peakon {

enum class AmplitudeClass {
  Constant,
  FiniteAsymptote,
  Unbounded,
  BlowUp,
  Extinction,
  Periodic,
  SingularDerivative,
  Undetermined,
};

enum class PositionClass {
  ConstantSpeed,
  FiniteAsymptoticSpeed,
  Braking,
  Runaway,
  FiniteTimeRunaway,
  WheelspinLimit,
  ThrustReverseBraking,
  Undetermined,
};

enum class ExtinctionKind { FiniteTime, Asymptotic };
enum class Verdict { Confirmed, Consistent, Undetermined };

std::string to_string(AmplitudeClass c);
std::string to_string(PositionClass c);
std::string to_string(ExtinctionKind k);
std::string to_string(Verdict v);

struct Evidence {
  std::string condition;
  /// (abscissa, value) pairs the verdict was derived from.
  std::vector<std::pair<double, double>> probes;
  std::optional<double> statistic;  // fitted slope or exact exponent
  Verdict verdict = Verdict::Undetermined;
  std::string detail;
};

struct BehaviorReport {
  std::string mode;  // "exact-power-family" or "numeric"
  int direction = 1;

  AmplitudeClass amplitude = AmplitudeClass::Undetermined;
  std::optional<double> amplitude_value;  // A_inf, A*, or period
  std::optional<double> amplitude_time;   // t* of blow-up / extinction
  std::optional<ExtinctionKind> extinction;

  PositionClass position = PositionClass::Undetermined;
  std::optional<double> position_value;  // c, c_inf, or X_inf
  std::optional<double> position_time;
  /// Braking only: false when X grows without bound while the speed dies out.
  std::optional<bool> position_bounded;

  std::vector<double> reversals;
  std::vector<Evidence> evidence;
  std::vector<std::string> notes;
};

/// Exact classes for m_t + kappa u^p m + lambda (u^q m)_x = 0, from the limits of
/// A = s^{-1/p}, X' = lambda s^{-q/p}, X'' = -q kappa lambda s^{-(1+q/p)} and X,
/// s = p kappa (t - t0), at the end of the lifespan in the given time
/// direction. Throws Error if any of p, q, kappa, lambda is zero.
BehaviorReport classify_power_family(double p, double q, double kappa, double lambda, double t0,
                                     int direction = 1, double X0 = 0.0);

struct ClassifyOptions {
  double slope_tol = 0.1;
  int ladder_points = 10;
  /// Ladders toward a finite limit start no farther than this (relative to
  /// max(1, |A*|)) from it.
  double ladder_base = 1e-3;
  /// |A f0(A0)| below this counts as a constant amplitude.
  double rest_tol = 1e-12;
  IntegratorOptions integrator{};
};

/// Simulates from `init` toward `horizon` and labels the amplitude and
/// position behavior at the end of the run. Probe failures downgrade verdicts
/// instead of throwing.
BehaviorReport classify_numeric(const ReducedSystem& rs, const PeakonState& init, double horizon,
                                const ClassifyOptions& opts = {});

struct TravellingWaveLimit {
  double a;
  double c;
};

/// (a, c) if the report describes convergence to a travelling-wave peakon of
/// amplitude a and speed c, with the order condition on f0 confirmed.
std::optional<TravellingWaveLimit> asymptotic_travelling_wave_test(const ReducedSystem& rs,
                                                                   const BehaviorReport& report);

}  // namespace peakon
