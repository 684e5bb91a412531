#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "peakon/expr.hpp"
#include "peakon/quadrature.hpp"

namespace peakon {

enum class Which { F, G };

struct ReduceOptions {
  double quad_tol = 1e-10;
  double deriv_step_scale = 6e-6;
  int quad_max_levels = 60;
  bool use_cache = true;
  /// Below this |A| the reduced functions are evaluated as limits.
  double zero_guard = 1e-12;
};

/// The scalar functions that drive single-peakon dynamics, extracted from
/// (f, g) by quadrature over the slope variable:
///
///   f0(A) = 1/(2A) * int_{-A}^{A} f(A, y) dy,   g0(A) likewise,
///   alpha(A) = g0'(A),
///
/// so that  A' = -A f0(A),  X' = g0(A),  X'' = -A f0(A) alpha(A).
///
/// The 1/2 in front of the integral follows from writing the jump of the
/// antiderivative F across the crest, [F]_X = F(A,-A) - F(A,A) = -2 F^-(A,A),
/// with F^-(A,A) = 1/2 int_{-A}^{A} f dy. Without it the Camassa-Holm peakon
/// would travel at twice its amplitude.
///
/// Evaluation is pure; the memo cache is keyed on exact arguments and guarded
/// by a mutex, so results never depend on its contents.
class ReducedSystem {
 public:
  explicit ReducedSystem(NonlinearitySpec spec, ReduceOptions opts = {});

  const NonlinearitySpec& spec() const { return spec_; }
  const ReduceOptions& options() const { return opts_; }

  /// int_0^b h(u, y) dy with h = f or g.
  double antiderivative_at(Which which, double u, double b) const;

  /// int_lo^hi h(u, y) dy, i.e. H(u, hi) - H(u, lo).
  double slope_integral(Which which, double u, double lo, double hi) const;

  double f0_at(double A) const;
  double g0_at(double A) const;

  /// g0'(A). Symbolic in u when g has no abs/sign/user calls, otherwise a
  /// 4th-order central difference with step deriv_step_scale * max(|A|, 1).
  double alpha_at(double A) const;

  /// Numeric-only alpha with an explicit step; exposed for cross-checks.
  double alpha_numeric(double A, double step) const;

  /// A' = -A f0(A) = -F^-(A, A), computed without dividing by A so that it
  /// stays finite where f0 has a 1/u singularity.
  double amplitude_rate(double A) const;

  /// X'' = -A f0(A) alpha(A).
  double acceleration(double A) const { return amplitude_rate(A) * alpha_at(A); }

  /// f0 over [lo, hi] split as [lo, 0] and [0, hi]; used for invariant checks.
  double f0_split(double A) const;

  void clear_cache() const;
  std::size_t cache_size() const;

 private:
  enum class Slot : std::uint8_t { F0, G0, Alpha, Rate };

  double even_integral(const Expr& h, double A) const;
  double reduced_raw(Slot slot, double A) const;
  double reduced(Slot slot, double A) const;
  double origin_limit(Slot slot) const;
  double alpha_symbolic(double A) const;

  NonlinearitySpec spec_;
  ReduceOptions opts_;
  Expr f_;
  Expr g_;
  std::optional<Expr> g_du_;

  struct Key {
    Slot slot;
    std::uint64_t bits;
    bool operator==(const Key& o) const { return slot == o.slot && bits == o.bits; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.bits) ^ (static_cast<std::size_t>(k.slot) * 0x9e3779b97f4a7c15ULL);
    }
  };
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<Key, double, KeyHash> cache_;
};

enum class PeakonKind { TravellingWave, DynamicalConstantSpeed, DynamicalAccelerating, Stationary };

std::string to_string(PeakonKind kind);

struct KindSample {
  double amplitude;
  std::optional<double> f0;
  std::optional<double> g0;
  std::optional<double> alpha;
  std::string failure;
};

struct KindReport {
  PeakonKind kind;
  std::vector<KindSample> samples;
};

/// Decides whether peakons of the equation travel rigidly, have a moving
/// amplitude at constant speed, accelerate, or sit still. Samples whose
/// evaluation fails are recorded and skipped.
KindReport classify_peakon_kind(const ReducedSystem& rs,
                                const std::vector<double>& samples = {-4, -2, -1, -0.5, 0.5, 1, 2, 4},
                                double tol = 1e-9);

}  // namespace peakon
