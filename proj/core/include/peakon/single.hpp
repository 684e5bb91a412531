#pragma once

#include <map>
#include <string>
#include <vector>

#include "peakon/reduce.hpp"

namespace peakon {

struct PeakonState {
  double t = 0.0;
  double A = 0.0;
  double X = 0.0;
};

struct TrajectorySample {
  double t;
  double A;
  double X;
  double Xdot;
  double Xddot;
};

enum class EventKind { BlowUp, Extinction, DirectionReversal, Equilibrium, BranchSwitch, Collision };
enum class Termination { HorizonReached, BlowUp, Extinction, Equilibrium, DomainError, Collision };

std::string to_string(EventKind kind);
std::string to_string(Termination termination);

struct EventRecord {
  EventKind kind;
  double time;
  std::map<std::string, double> payload;
};

/// Samples are always stored in increasing time, also for runs integrated
/// backwards; `direction` records which way the solver went.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<EventRecord> events;
  Termination termination = Termination::HorizonReached;
  std::string message;
  int direction = 1;
  long steps = 0;

  /// The state where integration stopped (last sample in solver order).
  const TrajectorySample& final_sample() const { return direction > 0 ? samples.back() : samples.front(); }
  const TrajectorySample& initial_sample() const { return direction > 0 ? samples.front() : samples.back(); }
  std::vector<const EventRecord*> events_of(EventKind kind) const;
};

struct IntegratorOptions {
  double tol = 1e-10;
  double sample_dt = 0.01;
  double A_max = 1e8;
  double eps_ext = 1e-9;
  double eps_eq = 1e-12;
  int stall_window = 100;
  double event_time_tol = 1e-10;
  bool stop_at_equilibrium = false;
  /// Integrate the second-order form A'' = (1/2) d/dA (A f0(A))^2 so that the
  /// amplitude continues through square-root turning points (breathers).
  bool oscillatory = false;
  /// Initial branch in oscillatory mode: A'(t0) = branch * (-A f0(A)).
  int branch = 1;
  double h_max = 0.5;
};

struct Rates {
  double Adot;
  double Xdot;
};

/// A' = -A f0(A), X' = g0(A).
Rates rhs1(const ReducedSystem& rs, const PeakonState& state);

/// X'' = -A f0(A) alpha(A).
double accel1(const ReducedSystem& rs, double A);

/// Integrates the single-peakon ODEs from `init` to `horizon` (either side of
/// init.t) with event detection. Evaluation failures end the run with
/// Termination::DomainError and keep the partial trajectory.
Trajectory integrate1(const ReducedSystem& rs, const PeakonState& init, double horizon,
                      const IntegratorOptions& opts = {});

struct QuadratureSolution {
  double delta_t;
  double delta_X;
};

/// Elapsed time and displacement while the amplitude moves from A0 to A1,
/// obtained by quadrature instead of time stepping:
///   delta_t = int_{A1}^{A0} dy / (y f0(y)),
///   delta_X = int_{A1}^{A0} g0(y) / (y f0(y)) dy.
/// Requires y f0(y) of one sign on the closed interval; throws EvalError on an
/// equilibrium crossing.
QuadratureSolution quadrature_solve(const ReducedSystem& rs, double A0, double A1);

}  // namespace peakon
