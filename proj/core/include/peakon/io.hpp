#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "peakon/classify.hpp"
#include "peakon/expr.hpp"
#include "peakon/npeakon.hpp"
#include "peakon/single.hpp"
#include "peakon/verify.hpp"

namespace peakon {

const char* version();

/// Round-trip text of the value ("%.17g"); inf/nan spelled out.
std::string format_double(double v);

/// One-line "# ..." header recording the equation, parameters, tolerances and
/// library version.
std::string csv_comment(const NonlinearitySpec& spec, const std::map<std::string, double>& tolerances);

/// Columns t,A,X,Xdot,Xddot,M,H1.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::string& comment);

/// Columns t,a_1..a_N,x_1..x_N,M,H1.
void write_ntrajectory_csv(std::ostream& out, const NTrajectory& traj, const std::string& comment);

/// Reads a single-peakon CSV (comment lines skipped). Requires t, A and X
/// columns; Xdot and Xddot are taken if present and NaN otherwise.
Trajectory read_trajectory_csv(std::istream& in);

/// JSON documents with stable field names, pretty-printed with 2 spaces.
std::string report_json(const BehaviorReport& report);
std::string verification_json(const VerificationReport& report);
std::string run_json(const Trajectory& traj);
std::string run_json(const NTrajectory& traj);

}  // namespace peakon
