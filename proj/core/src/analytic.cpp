#include "peakon/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "peakon/error.hpp"

namespace peakon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Blueprint {
  CatalogId id;
  const char* name;
  const char* f;
  const char* g;
  ParamMap equation_defaults;
  ParamMap constant_defaults;
};

const std::vector<Blueprint>& blueprints() {
  static const std::vector<Blueprint> table = {
      {CatalogId::PowerFamily, "power-family", "k*u^p", "lam*u^q",
       {{"k", 1}, {"lam", 1}, {"p", 1}, {"q", 1}}, {{"t0", 0}, {"X0", 0}}},
      {CatalogId::StationaryFamily, "stationary-family", "k*u^p", "lam*u^q*ux",
       {{"k", 1}, {"lam", 1}, {"p", 1}, {"q", 1}}, {{"t0", 0}, {"X0", 0}}},
      {CatalogId::TravellingEx1, "travelling-ex1", "k*u^p*ux", "u^(p-1)*(u^2+lam*ux^2)",
       {{"k", 1}, {"lam", 0}, {"p", 0}}, {{"a", 1}, {"x0", 0}}},
      {CatalogId::AsymptoticEx2, "asymptotic-ex2", "k*(u-2)*(u-1)", "lam*u",
       {{"k", 1}, {"lam", 1}}, {{"t0", 0}, {"X0", 0}}},
      {CatalogId::ReversingEx3, "reversing-ex3", "k*(u-2)*(u-1)", "lam*(3-2*u)",
       {{"k", 1}, {"lam", 1}}, {{"t0", 0}, {"X0", 0}}},
      {CatalogId::DissipatingEx5, "dissipating-ex5", "k*(a-u)", "lam*u",
       {{"k", 1}, {"a", 1}, {"lam", 1}}, {{"t0", 0}, {"X0", 0}}},
      {CatalogId::BlowupEx5, "blowup-ex5", "k*(a-u)", "lam*u",
       {{"k", 1}, {"a", 1}, {"lam", 1}}, {{"t0", 1}, {"X0", 0}}},
      {CatalogId::Breather, "breather", "k*sqrt((a/u)^2-1)", "c",
       {{"a", 1}, {"k", 2}, {"c", 0}}, {{"x0", 0}}},
  };
  return table;
}

const Blueprint& blueprint(CatalogId id) {
  for (const auto& b : blueprints())
    if (b.id == id) return b;
  throw Error("unknown catalog id");
}

void require_nonzero(const ParamMap& p, std::initializer_list<const char*> names) {
  for (const char* n : names)
    if (p.at(n) == 0.0) throw Error(std::string("catalog parameter '") + n + "' must be non-zero");
}

TimeDomain domain_of(CatalogId id, const ParamMap& p) {
  switch (id) {
    case CatalogId::PowerFamily:
    case CatalogId::StationaryFamily: {
      const double t0 = p.at("t0");
      return p.at("p") * p.at("k") > 0 ? TimeDomain{t0, kInf} : TimeDomain{-kInf, t0};
    }
    case CatalogId::BlowupEx5: {
      const double t0 = p.at("t0");
      return p.at("k") * p.at("a") > 0 ? TimeDomain{-kInf, t0} : TimeDomain{t0, kInf};
    }
    default:
      return {-kInf, kInf};
  }
}

}  // namespace

std::string to_string(CatalogId id) { return blueprint(id).name; }

CatalogId catalog_id_from_string(const std::string& name) {
  for (const auto& b : blueprints())
    if (name == b.name) return b.id;
  throw Error("unknown catalog entry '" + name + "'");
}

std::vector<CatalogId> all_catalog_ids() {
  std::vector<CatalogId> ids;
  for (const auto& b : blueprints()) ids.push_back(b.id);
  return ids;
}

double CatalogEntry::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw Error("catalog entry has no parameter '" + name + "'");
  return it->second;
}

CatalogEntry make_entry(CatalogId id, const ParamMap& overrides) {
  const Blueprint& b = blueprint(id);
  ParamMap eq = b.equation_defaults;
  ParamMap all = b.equation_defaults;
  all.insert(b.constant_defaults.begin(), b.constant_defaults.end());
  for (const auto& [k, v] : overrides) {
    if (!all.count(k)) throw Error("catalog entry " + std::string(b.name) + " has no parameter '" + k + "'");
    all[k] = v;
    if (eq.count(k)) eq[k] = v;
  }
  switch (id) {
    case CatalogId::PowerFamily:
      require_nonzero(all, {"k", "lam", "p", "q"});
      break;
    case CatalogId::StationaryFamily:
      require_nonzero(all, {"k", "p"});
      break;
    case CatalogId::AsymptoticEx2:
    case CatalogId::ReversingEx3:
      require_nonzero(all, {"k", "lam"});
      break;
    case CatalogId::DissipatingEx5:
    case CatalogId::BlowupEx5:
      require_nonzero(all, {"k", "a", "lam"});
      break;
    case CatalogId::Breather:
      require_nonzero(all, {"a", "k"});
      break;
    case CatalogId::TravellingEx1:
      if (all.at("a") == 0.0) throw Error("catalog parameter 'a' must be non-zero");
      break;
  }
  return CatalogEntry{id, all, make_spec(b.f, b.g, eq), domain_of(id, all)};
}

ClosedForm closed_form(const CatalogEntry& e, double t) {
  if (!e.domain.contains(t))
    throw Error("t = " + std::to_string(t) + " outside the domain of " + to_string(e.id));
  const auto& p = e.params;
  switch (e.id) {
    case CatalogId::PowerFamily:
    case CatalogId::StationaryFamily: {
      const double pp = p.at("p"), k = p.at("k"), t0 = p.at("t0"), X0 = p.at("X0");
      const double s = pp * k * (t - t0);
      const double A = std::pow(s, -1.0 / pp);
      if (e.id == CatalogId::StationaryFamily) return {A, X0};
      const double q = p.at("q"), lam = p.at("lam");
      if (q == pp) return {A, X0 + lam / (pp * k) * std::log(std::fabs(t - t0))};
      return {A, X0 + lam / ((pp - q) * k) * std::pow(s, 1.0 - q / pp)};
    }
    case CatalogId::TravellingEx1: {
      const double a = p.at("a"), lam = p.at("lam"), pp = p.at("p");
      const double c = (1.0 + lam / 3.0) * std::pow(a, pp + 1.0);
      return {a, p.at("x0") + c * t};
    }
    case CatalogId::AsymptoticEx2:
    case CatalogId::ReversingEx3: {
      const double k = p.at("k"), lam = p.at("lam"), t0 = p.at("t0"), X0 = p.at("X0");
      const double S = std::sqrt(1.0 + std::exp(2.0 * k * (t0 - t)));
      const double A = 1.0 + 1.0 / S;
      if (e.id == CatalogId::AsymptoticEx2) return {A, 2.0 * lam * (t - t0) + lam / k * std::log1p(S) + X0};
      return {A, lam * (t0 - t) - 2.0 * lam / k * std::log1p(S) + X0};
    }
    case CatalogId::DissipatingEx5: {
      const double k = p.at("k"), a = p.at("a"), lam = p.at("lam"), t0 = p.at("t0"), X0 = p.at("X0");
      const double s = k * a * (t - t0);
      return {a / (1.0 + std::exp(s)), lam / k * (std::log(2.0) - std::log1p(std::exp(-s))) + X0};
    }
    case CatalogId::BlowupEx5: {
      const double k = p.at("k"), a = p.at("a"), lam = p.at("lam"), t0 = p.at("t0"), X0 = p.at("X0");
      const double s = k * a * (t - t0);
      // log|1 - e^{-s}|: the argument is negative on the branch that starts
      // from the travelling wave at t -> -infinity.
      return {-a / std::expm1(s), -lam / k * std::log(std::fabs(-std::expm1(-s))) + X0};
    }
    case CatalogId::Breather: {
      const double a = p.at("a"), k = p.at("k"), c = p.at("c");
      return {a * std::cos(k * t), c * t + p.at("x0")};
    }
  }
  throw Error("unknown catalog id");
}

PeakonState exact_state(const CatalogEntry& entry, double t) {
  const ClosedForm cf = closed_form(entry, t);
  return {t, cf.A, cf.X};
}

NonlinearitySpec design_breather(double a, double kappa, double c) {
  if (a == 0.0 || kappa == 0.0) throw Error("design_breather requires a != 0 and kappa != 0");
  return make_spec("k*sqrt((a/u)^2-1)", "c", {{"a", a}, {"k", kappa}, {"c", c}});
}

namespace {

/// Descending branch of a periodic profile: t in [t_hi, t_lo] maps onto
/// [phi_lo, phi_hi] in reverse order.
class Branch {
 public:
  Branch(std::function<double(double)> phi, std::function<double(double)> slope, double t_hi, double t_lo,
         double phi_hi, double phi_lo)
      : phi_(std::move(phi)), slope_(std::move(slope)), t_hi_(t_hi), t_lo_(t_lo), phi_hi_(phi_hi), phi_lo_(phi_lo) {}

  double inverse(double u) const {
    const double span = phi_hi_ - phi_lo_;
    if (u > phi_hi_ + 1e-12 * span || u < phi_lo_ - 1e-12 * span)
      throw EvalError("u = " + std::to_string(u) + " outside the range of the periodic profile");
    if (u >= phi_hi_) return t_hi_;
    if (u <= phi_lo_) return t_lo_;
    const double a = std::min(t_hi_, t_lo_), b = std::max(t_hi_, t_lo_);
    auto tol = [](double x, double y) { return std::fabs(x - y) <= 1e-12; };
    const auto [l, r] = boost::math::tools::bisect([&](double t) { return phi_(t) - u; }, a, b, tol);
    return 0.5 * (l + r);
  }

  double rate(double u) const { return -slope_(inverse(u)); }

 private:
  std::function<double(double)> phi_;
  std::function<double(double)> slope_;
  double t_hi_, t_lo_, phi_hi_, phi_lo_;
};

NonlinearitySpec spec_from_branch(std::shared_ptr<const Branch> branch, double c) {
  auto fn = std::make_shared<UserFunction>();
  fn->name = "phi_slope";
  fn->fn = [branch](double u) { return branch->rate(u); };
  FunctionTable table{{fn->name, fn}};
  return make_spec("phi_slope(u)/u", "c", {{"c", c}}, table);
}

}  // namespace

NonlinearitySpec design_periodic(const Expr& phi, double period, double c) {
  if (!(period > 0) || !std::isfinite(period)) throw Error("design_periodic requires a positive period");
  for (const auto& name : phi.parameters())
    if (name != "t") throw Error("periodic profile may only use the parameter 't', found '" + name + "'");
  auto value = [phi](double t) { return phi.eval(0.0, 0.0, {{"t", t}}); };
  const double h = 1e-3 * period;
  auto slope = [value, h](double t) {
    return (8.0 * (value(t + h) - value(t - h)) - (value(t + 2 * h) - value(t - 2 * h))) / (12.0 * h);
  };

  constexpr int n = 4096;
  std::vector<double> samples(n + 1);
  for (int i = 0; i <= n; ++i) samples[i] = value(period * i / n);
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double scale = std::max({std::fabs(*mn), std::fabs(*mx), 1.0});
  if (*mx - *mn <= 1e-12 * scale) throw Error("periodic profile is constant");

  const int i_max = static_cast<int>(mx - samples.begin());
  int i_min = i_max;
  double best = samples[i_max];
  for (int j = 1; j <= n; ++j) {
    const double v = samples[(i_max + j) % n];
    if (v < best) {
      best = v;
      i_min = i_max + j;
    }
  }
  for (int j = i_max; j < i_min; ++j) {
    if (samples[(j + 1) % n] >= samples[j % n])
      throw Error("periodic profile is not strictly monotone between its maximum and minimum");
  }

  // Refine the extremes; the grid only brackets them.
  const double dt = period / n;
  const int bits = std::numeric_limits<double>::digits / 2;
  const auto top = boost::math::tools::brent_find_minima([&](double t) { return -value(t); },
                                                          dt * (i_max - 1), dt * (i_max + 1), bits);
  const auto bottom =
      boost::math::tools::brent_find_minima(value, dt * (i_min - 1), dt * (i_min + 1), bits);
  auto branch = std::make_shared<const Branch>(value, slope, top.first, bottom.first, -top.second, bottom.second);
  return spec_from_branch(branch, c);
}

NonlinearitySpec design_periodic(const std::vector<double>& t, const std::vector<double>& phi, double c) {
  if (t.size() != phi.size() || t.size() < 4) throw Error("periodic table needs at least 4 (t, phi) pairs");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw Error("periodic table times must be strictly increasing");
  const bool descending = phi.back() < phi.front();
  for (std::size_t i = 1; i < phi.size(); ++i) {
    if (phi[i] == phi[i - 1] || (phi[i] < phi[i - 1]) != descending)
      throw Error("periodic table is not strictly monotone over the half period");
  }
  auto interp = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::vector<double>(t), std::vector<double>(phi));
  auto value = [interp](double s) { return (*interp)(s); };
  auto slope = [interp](double s) { return interp->prime(s); };
  const double hi = std::max(phi.front(), phi.back()), lo = std::min(phi.front(), phi.back());
  const double t_hi = descending ? t.front() : t.back();
  const double t_lo = descending ? t.back() : t.front();
  return spec_from_branch(std::make_shared<const Branch>(value, slope, t_hi, t_lo, hi, lo), c);
}

}  // namespace peakon
