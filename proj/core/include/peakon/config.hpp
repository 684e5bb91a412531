#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peakon/expr.hpp"

namespace peakon {

/// Batch run description. Text format:
///
///   [equation]
///   f = "k*(u-2)*(u-1)"
///   g = "lam*(3-2*u)"
///   k = 1            ; any other key is a parameter
///   [run]
///   mode = simulate  ; simulate | simulate-n | classify | verify | design-breather | catalog
///   t0 = 0
///   horizon = 10
///   sample_dt = 0.01
///   A = 1            ; single peakon
///   X = 0
///   a = 1, 0.5       ; N peakons
///   x = -5, 0
///   oscillatory = false
///   [tolerances]
///   quad_tol = 1e-10
///   ...
///   [output]
///   csv = out.csv
///   report = out.json
///
/// `#` and `;` start comments; values may be double-quoted.
struct RunConfig {
  std::string f;
  std::string g;
  ParamMap params;

  std::string mode = "simulate";
  double t0 = 0.0;
  double horizon = 10.0;
  double sample_dt = 0.01;
  std::optional<double> A;
  std::optional<double> X;
  std::vector<double> a;
  std::vector<double> x;
  bool oscillatory = false;

  double quad_tol = 1e-10;
  double ode_tol = 1e-10;
  double eps_ext = 1e-9;
  double A_max = 1e8;
  double gap_min = 1e-9;
  double slope_tol = 0.1;
  int ladder_points = 10;

  std::string csv_path;
  std::string report_path;

  /// Throws ConfigError if f/g are missing or a tolerance is not positive.
  void validate() const;
};

/// Parses the text format. Errors carry the offending line number.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a file; throws ConfigError if it cannot be opened.
RunConfig load_config(const std::string& path);

}  // namespace peakon
