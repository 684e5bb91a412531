#pragma once

#include <vector>

#include "peakon/reduce.hpp"
#include "peakon/single.hpp"

namespace peakon {

/// Superposition u = sum_i a_i exp(-|x - x_i|).
struct NPeakonState {
  double t = 0.0;
  std::vector<double> a;
  std::vector<double> x;

  std::size_t size() const { return a.size(); }
};

struct FieldValue {
  double u;
  double ux_left;
  double ux_right;
};

/// Field and one-sided slopes at x. A peak sitting exactly at x contributes
/// +a_i to the left slope and -a_i to the right slope.
FieldValue field_at(const NPeakonState& state, double x);

struct NRates {
  std::vector<double> adot;
  std::vector<double> xdot;
};

/// Jump dynamics at each crest:
///   a_i' =  1/2 [F(u, ux)]_{x_i},   x_i' = -[G(u, ux)]_{x_i} / (2 a_i),
/// with [H]_{x_i} = H(u_i, ux_right) - H(u_i, ux_left).
NRates rhsN(const ReducedSystem& rs, const NPeakonState& state, double a_min = 1e-12);

struct NSample {
  double t;
  std::vector<double> a;
  std::vector<double> x;
};

struct NTrajectory {
  std::vector<NSample> samples;  // increasing time
  std::vector<EventRecord> events;
  Termination termination = Termination::HorizonReached;
  std::string message;
  int direction = 1;
  long steps = 0;
};

struct NIntegratorOptions {
  double tol = 1e-10;
  double sample_dt = 0.01;
  double gap_min = 1e-9;
  double a_min = 1e-12;
  double A_max = 1e8;
  double h_max = 0.5;
};

NTrajectory integrateN(const ReducedSystem& rs, const NPeakonState& init, double horizon,
                       const NIntegratorOptions& opts = {});

}  // namespace peakon
