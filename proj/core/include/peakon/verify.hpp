#pragma once

#include <string>
#include <vector>

#include "peakon/npeakon.hpp"
#include "peakon/reduce.hpp"
#include "peakon/single.hpp"

namespace peakon {

/// Momentum M = int m dx and the H1 functional int (u^2 + u_x^2) dx of a
/// peakon superposition: M = 2 sum a_i, H1 = 2 sum_ij a_i a_j exp(-|x_i - x_j|).
struct Functionals {
  double t;
  double M;
  double H1;
};

Functionals functionals_of(double t, const std::vector<double>& a, const std::vector<double>& x);
std::vector<Functionals> functionals(const Trajectory& traj);
std::vector<Functionals> functionals(const NTrajectory& traj);

/// max |M(t) - M(t_first)| and the same for H1.
struct Drift {
  double M;
  double H1;
};
Drift functional_drift(const std::vector<Functionals>& series);

/// Largest of |dA/dt + A f0(A)| and |dX/dt - g0(A)| over interior samples,
/// with time derivatives from 4th-order central differences of the sampled
/// columns. Only stencils of five equally spaced samples are used. With
/// `oscillatory`, the amplitude residual compares |dA/dt| with |A f0(A)| so
/// that either branch of a turning-point solution is accepted.
/// Throws Error with fewer than five samples or no usable stencil.
double ode_residual(const ReducedSystem& rs, const Trajectory& traj, bool oscillatory = false);

/// max |u - u_xx| over an equally spaced grid, with u from the peakon ansatz
/// and u_xx from the 2nd-order three-point difference at the grid spacing.
/// Throws Error if a grid point lies within 0.01 of a peak, if a stencil
/// straddles a peak, or if the grid is not equally spaced.
double offpeak_residual(const std::vector<double>& a, const std::vector<double>& x, const std::vector<double>& grid);
double offpeak_residual(const TrajectorySample& sample, const std::vector<double>& grid);

/// n + 1 equally spaced points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int n);

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct VerificationReport {
  double max_ode_residual = 0;
  Drift functional_drift{0, 0};
  /// max |M - 2A| and |H1 - 2A^2| over the samples.
  double functional_identity = 0;
  double offpeak_residual = 0;
  double offpeak_order = 0;
  std::vector<Check> checks;

  bool passed() const;
};

struct VerifyOptions {
  double ode_threshold = 1e-5;
  double identity_threshold = 1e-12;
  /// Spacing of the off-peak grid; the residual threshold is h^2 max|u|.
  double offpeak_h = 1e-3;
  bool oscillatory = false;
};

VerificationReport verify_trajectory(const ReducedSystem& rs, const Trajectory& traj, const VerifyOptions& opts = {});

}  // namespace peakon
