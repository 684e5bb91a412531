#pragma once

#include <string>
#include <vector>

#include "peakon/expr.hpp"
#include "peakon/single.hpp"

namespace peakon {

enum class CatalogId {
  PowerFamily,
  StationaryFamily,
  TravellingEx1,
  AsymptoticEx2,
  ReversingEx3,
  DissipatingEx5,
  BlowupEx5,
  Breather,
};

std::string to_string(CatalogId id);
CatalogId catalog_id_from_string(const std::string& name);
std::vector<CatalogId> all_catalog_ids();

/// Open time interval (lo, hi); infinite ends allowed.
struct TimeDomain {
  double lo;
  double hi;
  bool contains(double t) const { return t > lo && t < hi; }
};

/// A worked example with an exact solution. `params` holds the equation
/// parameters together with the integration constants (t0, X0, ...), while
/// `spec` only binds the former.
struct CatalogEntry {
  CatalogId id;
  ParamMap params;
  NonlinearitySpec spec;
  TimeDomain domain;

  double param(const std::string& name) const;
};

/// Builds an entry from its defaults with `overrides` applied. Throws Error for
/// unknown parameter names or degenerate values.
CatalogEntry make_entry(CatalogId id, const ParamMap& overrides = {});

struct ClosedForm {
  double A;
  double X;
};

/// Exact amplitude and position. Throws Error if t lies outside the entry's
/// domain.
ClosedForm closed_form(const CatalogEntry& entry, double t);

/// Convenience: the exact state at time t.
PeakonState exact_state(const CatalogEntry& entry, double t);

/// Equation whose peakons oscillate as A = a cos(kappa t) while moving at the
/// constant speed c: f = kappa sqrt((a/u)^2 - 1), g = c.
NonlinearitySpec design_breather(double a, double kappa, double c);

/// Equation whose peakon amplitude follows a prescribed periodic profile phi:
/// f0(u) = -phi'(phi^{-1}(u)) / u on the descending half period, g = c.
///
/// `phi` is an expression in the parameter `t` (e.g. "2 + cos(t)") with the
/// given period. The descending half period runs from the maximum to the
/// following minimum and must be strictly monotone. The profile enters f
/// through the user function `phi_slope(u) = -phi'(phi^{-1}(u))`.
NonlinearitySpec design_periodic(const Expr& phi, double period, double c);

/// Same from a table (t_i, phi_i) sampled over one strictly monotone half
/// period. The table is interpolated with a monotone cubic and inverted by
/// bisection.
NonlinearitySpec design_periodic(const std::vector<double>& t, const std::vector<double>& phi, double c);

}  // namespace peakon
