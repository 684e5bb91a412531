#include "peakon/reduce.hpp"

#include <bit>
#include <cmath>

namespace peakon {

namespace {

constexpr std::size_t kMaxCacheEntries = 1 << 18;

}  // namespace

ReducedSystem::ReducedSystem(NonlinearitySpec spec, ReduceOptions opts)
    : spec_(std::move(spec)), opts_(opts), f_(spec_.f.bind(spec_.params)), g_(spec_.g.bind(spec_.params)) {
  if (!g_.has_nonsmooth()) g_du_ = g_.derivative_u();
}

double ReducedSystem::slope_integral(Which which, double u, double lo, double hi) const {
  const Expr& h = which == Which::F ? f_ : g_;
  quad::Options qo{opts_.quad_tol, opts_.quad_max_levels};
  return quad::integrate([&](double y) { return h.eval(u, y); }, lo, hi, qo).value;
}

double ReducedSystem::antiderivative_at(Which which, double u, double b) const {
  return slope_integral(which, u, 0.0, b);
}

double ReducedSystem::even_integral(const Expr& h, double A) const {
  // int_{-A}^{A} h(A, y) dy folded onto [0, A].
  quad::Options qo{opts_.quad_tol, opts_.quad_max_levels};
  if (!h.depends_on_ux()) return 2.0 * A * h.eval(A, 0.0);
  return quad::integrate([&](double y) { return h.eval(A, y) + h.eval(A, -y); }, 0.0, A, qo).value;
}

double ReducedSystem::f0_split(double A) const {
  quad::Options qo{opts_.quad_tol, opts_.quad_max_levels};
  auto fA = [&](double y) { return f_.eval(A, y); };
  const double total = quad::integrate(fA, -A, 0.0, qo).value + quad::integrate(fA, 0.0, A, qo).value;
  return total / (2.0 * A);
}

double ReducedSystem::alpha_symbolic(double A) const {
  const double g0 = g0_at(A);
  const double edge = 0.5 * (g_.eval(A, A) + g_.eval(A, -A));
  const double inner = 0.5 * even_integral(*g_du_, A);
  return (edge - g0 + inner) / A;
}

double ReducedSystem::alpha_numeric(double A, double step) const {
  auto g0 = [&](double a) { return g0_at(a); };
  try {
    return (g0(A - 2 * step) - 8 * g0(A - step) + 8 * g0(A + step) - g0(A + 2 * step)) / (12 * step);
  } catch (const EvalError&) {
  }
  // One side of the stencil left the domain; use whichever one-sided
  // second-order stencil still evaluates.
  try {
    return (-3 * g0(A) + 4 * g0(A + step) - g0(A + 2 * step)) / (2 * step);
  } catch (const EvalError&) {
  }
  return (3 * g0(A) - 4 * g0(A - step) + g0(A - 2 * step)) / (2 * step);
}

double ReducedSystem::reduced_raw(Slot slot, double A) const {
  switch (slot) {
    case Slot::F0:
      return even_integral(f_, A) / (2.0 * A);
    case Slot::G0:
      return even_integral(g_, A) / (2.0 * A);
    case Slot::Rate:
      return -0.5 * even_integral(f_, A);
    case Slot::Alpha:
      if (g_du_) {
        try {
          return alpha_symbolic(A);
        } catch (const EvalError&) {
          // e.g. sqrt'(0) on the quadrature path; fall through
        }
      }
      return alpha_numeric(A, opts_.deriv_step_scale * std::max(std::fabs(A), 1.0));
  }
  return 0.0;
}

double ReducedSystem::origin_limit(Slot slot) const {
  if (slot == Slot::Rate) {
    // -A f0(A) vanishes with A whenever f0 has a finite limit.
    origin_limit(Slot::F0);
    return 0.0;
  }
  // Richardson extrapolation from A = h, h/2, h/4 assuming v(A) = L + c1 A + c2 A^2.
  const double v1 = reduced_raw(slot, 1e-4);
  const double v2 = reduced_raw(slot, 5e-5);
  const double v3 = reduced_raw(slot, 2.5e-5);
  const double d1 = v2 - v1;
  const double d2 = v3 - v2;
  const double scale = 1.0 + std::fabs(v3);
  const bool settled = std::fabs(d1) <= 1e-8 * scale && std::fabs(d2) <= 1e-8 * scale;
  if (!settled && std::fabs(d2) > 0.75 * std::fabs(d1))
    throw SingularOriginError("reduced function has no finite limit at A = 0");
  return (8.0 * v3 - 6.0 * v2 + v1) / 3.0;
}

double ReducedSystem::reduced(Slot slot, double A) const {
  if (!opts_.use_cache) return std::fabs(A) < opts_.zero_guard ? origin_limit(slot) : reduced_raw(slot, A);
  const Key key{slot, std::bit_cast<std::uint64_t>(A)};
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double v = std::fabs(A) < opts_.zero_guard ? origin_limit(slot) : reduced_raw(slot, A);
  std::lock_guard lock(cache_mutex_);
  if (cache_.size() >= kMaxCacheEntries) cache_.clear();
  cache_.emplace(key, v);
  return v;
}

double ReducedSystem::f0_at(double A) const { return reduced(Slot::F0, A); }
double ReducedSystem::g0_at(double A) const { return reduced(Slot::G0, A); }
double ReducedSystem::alpha_at(double A) const { return reduced(Slot::Alpha, A); }

double ReducedSystem::amplitude_rate(double A) const { return reduced(Slot::Rate, A); }

void ReducedSystem::clear_cache() const {
  std::lock_guard lock(cache_mutex_);
  cache_.clear();
}

std::size_t ReducedSystem::cache_size() const {
  std::lock_guard lock(cache_mutex_);
  return cache_.size();
}

// ---------------------------------------------------------------------------

std::string to_string(PeakonKind kind) {
  switch (kind) {
    case PeakonKind::TravellingWave:
      return "travelling-wave";
    case PeakonKind::DynamicalConstantSpeed:
      return "dynamical-constant-speed";
    case PeakonKind::DynamicalAccelerating:
      return "dynamical-accelerating";
    case PeakonKind::Stationary:
      return "stationary";
  }
  return "?";
}

KindReport classify_peakon_kind(const ReducedSystem& rs, const std::vector<double>& samples, double tol) {
  KindReport report{PeakonKind::Stationary, {}};
  bool any_f0 = false, any_g0 = false, any_alpha = false;
  int ok = 0;
  for (double a : samples) {
    KindSample s{a, {}, {}, {}, {}};
    try {
      s.f0 = rs.f0_at(a);
      s.g0 = rs.g0_at(a);
      s.alpha = rs.alpha_at(a);
      ++ok;
      any_f0 |= std::fabs(*s.f0) > tol;
      any_g0 |= std::fabs(*s.g0) > tol;
      any_alpha |= std::fabs(*s.alpha) > tol;
    } catch (const Error& e) {
      s.failure = e.what();
    }
    report.samples.push_back(std::move(s));
  }
  if (ok == 0) throw EvalError("peakon kind: every sample amplitude failed to evaluate");
  if (!any_f0)
    report.kind = any_g0 ? PeakonKind::TravellingWave : PeakonKind::Stationary;
  else
    report.kind = any_alpha ? PeakonKind::DynamicalAccelerating : PeakonKind::DynamicalConstantSpeed;
  return report;
}

}  // namespace peakon
