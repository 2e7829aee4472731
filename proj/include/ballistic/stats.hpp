// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_STATS_HPP
#define BALLISTIC_STATS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ballistic/engine.hpp"
#include "ballistic/model.hpp"

namespace ballistic {

/// Alive-density estimates per speed class over a time grid. Estimates are
/// per unit length at unit initial intensity; each replica counts alive
/// particles of a class inside a fixed window that stays outside the light
/// cone of the sampled boundary for every requested time, and normalizes by
/// the realized number of initial points in the window.
struct DensityCurve {
  struct ClassCurve {
    double speed = 0.0;  // atom value, or bin center for continuous laws
    std::vector<double> estimate;
    std::vector<double> stderr_;
  };
  std::vector<double> times;
  std::vector<ClassCurve> classes;
  std::uint32_t replicas = 0;
  double window_half_width = 0.0;

  const ClassCurve* find_class(double speed) const noexcept;
};

DensityCurve estimate_density(const SpeedLaw& law, std::size_t n, std::vector<double> times,
                              std::uint32_t replicas, Seed seed);

enum class SpeedClass3 { minus_one, zero, plus_one };

/// A quoted reference asymptotic: either a value of c_v(t) for the current
/// regime of p, or a t-independent limit constant.
struct DensityReference {
  double value = 0.0;
  bool is_limit = false;
};

/// Known asymptotics of the symmetric three-speed gas (Krapivsky, Redner,
/// Leyvraz 1995; Droz, Rey, Frachebourg, Piasecki 1995). Calls with p within
/// 1e-6 of 1/4 route to the critical formulas. For p > 1/4 the +1 class
/// decay constants are not available and ErrorCode::unavailable is thrown.
/// For p > 1/4 and the 0 class the returned limit is 2 - 1/sqrt(p), the
/// one-sided survival constant; the absolute density limit is p times its
/// square.
DensityReference reference_density(double p, double t, SpeedClass3 cls);

/// Subcritical +1-class candidates for the decay exponent; measurements
/// support the t^{-1/2} form. Both are kept so the data can be reported
/// against either.
double reference_plus_decay_half(double p, double t);  // sqrt((1/4-p)/pi) * t^{-1/2}
double reference_plus_decay_one(double p, double t);   // sqrt((1/4-p)/pi) * t^{-1}

/// OLS slope of log(estimate) against log(t) for one class, restricted to
/// grid times in [t_lo, t_hi].
struct ExponentFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  std::size_t points = 0;
};
ExponentFit fit_exponent(const DensityCurve& curve, double cls, double t_lo, double t_hi);

/// Fraction of replicas whose origin particle is alive at the horizon, with
/// a Wilson 95% interval.
struct SurvivalEstimate {
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double horizon = 0.0;
  std::uint32_t replicas = 0;
};

/// v0: when present, the origin particle's speed is forced to this value
/// after sampling (the conditioning of the model is exactly this
/// substitution).
SurvivalEstimate estimate_survival(const SpeedLaw& law, Domain domain, std::optional<double> v0,
                                   std::size_t n, double horizon, std::uint32_t replicas,
                                   Seed seed);

/// Geometric time grid with points_per_decade points per decade, inclusive
/// of both endpoints.
std::vector<double> geometric_times(double t_lo, double t_hi, std::size_t points_per_decade = 20);

struct SweepPoint {
  double p = 0.0;
  SurvivalEstimate survival;
  double exponent = 0.0;        // fitted c0 slope
  double exponent_stderr = 0.0;
  double runtime_seconds = 0.0;
};

struct SweepResult {
  std::vector<double> grid;
  std::vector<SweepPoint> points;
};

struct SweepOptions {
  std::size_t n = 100000;
  double horizon = 0.0;          // 0: default safe horizon n/(2 v_max) * 0.8
  std::uint32_t replicas = 200;  // survival replicas
  std::uint32_t density_replicas = 4;
  // exponent-fit window; clamped to the horizon at run time
  double fit_t_lo = 100.0;
  double fit_t_hi = 1000.0;
  std::uint32_t parallelism = 1;
};

/// Survival + density exponent per grid point. Replicas are deterministic
/// functions of (seed, grid index, replica index); the result is identical
/// for any parallelism degree.
SweepResult sweep(const std::vector<double>& grid, Seed seed, const SweepOptions& options);

/// Wilson 95% score interval for x successes out of n.
void wilson_interval(std::uint64_t successes, std::uint64_t trials, double& lo, double& hi);

}  // namespace ballistic

#endif
