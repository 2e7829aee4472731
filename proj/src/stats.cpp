// SPDX-License-Identifier: Apache-2.0
#include "ballistic/stats.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <thread>

#include "ballistic/errors.hpp"

namespace ballistic {

namespace {

constexpr std::uint64_t kDensityTask = 0x64656e73;   // task tags for seed derivation
constexpr std::uint64_t kSurvivalTask = 0x73757276;
constexpr std::uint64_t kSweepTask = 0x73777065;

std::vector<double> class_speeds(const SpeedLaw& law, std::size_t uniform_bins) {
  std::vector<double> speeds;
  if (law.kind() == SpeedLaw::Kind::discrete) {
    for (const Atom& a : law.atoms()) speeds.push_back(a.speed);
  } else {
    const double width = (law.hi() - law.lo()) / static_cast<double>(uniform_bins);
    for (std::size_t b = 0; b < uniform_bins; ++b) {
      speeds.push_back(law.lo() + (static_cast<double>(b) + 0.5) * width);
    }
  }
  return speeds;
}

std::size_t class_index(const SpeedLaw& law, double v, std::size_t uniform_bins) {
  if (law.kind() == SpeedLaw::Kind::discrete) {
    const auto& atoms = law.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].speed == v) return i;
    }
    return atoms.size();  // unreachable for samples drawn from the law
  }
  double u = (v - law.lo()) / (law.hi() - law.lo());
  auto b = static_cast<std::size_t>(u * static_cast<double>(uniform_bins));
  return std::min(b, uniform_bins - 1);
}

}  // namespace

const DensityCurve::ClassCurve* DensityCurve::find_class(double speed) const noexcept {
  for (const auto& c : classes) {
    if (c.speed == speed) return &c;
  }
  return nullptr;
}

std::vector<double> geometric_times(double t_lo, double t_hi, std::size_t points_per_decade) {
  if (!(t_lo > 0.0 && t_hi > t_lo)) {
    throw_error(ErrorCode::invalid_argument, "geometric_times: need 0 < t_lo < t_hi");
  }
  const double decades = std::log10(t_hi / t_lo);
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                  std::ceil(decades * static_cast<double>(points_per_decade))));
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    times[i] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / static_cast<double>(steps));
  }
  times.back() = t_hi;
  return times;
}

DensityCurve estimate_density(const SpeedLaw& law, std::size_t n, std::vector<double> times,
                              std::uint32_t replicas, Seed seed) {
  if (times.empty()) throw_error(ErrorCode::invalid_argument, "estimate_density: empty time grid");
  if (replicas == 0) throw_error(ErrorCode::invalid_argument, "estimate_density: replicas must be >= 1");
  for (double t : times) {
    if (!(t >= 0.0)) throw_error(ErrorCode::invalid_argument, "estimate_density: times must be >= 0");
  }
  const double t_max = *std::max_element(times.begin(), times.end());
  constexpr std::size_t kUniformBins = 8;

  DensityCurve curve;
  curve.times = times;
  curve.replicas = replicas;
  const std::vector<double> speeds = class_speeds(law, kUniformBins);
  const std::size_t n_cls = speeds.size();
  for (double s : speeds) {
    curve.classes.push_back({s, std::vector<double>(times.size(), 0.0),
                             std::vector<double>(times.size(), 0.0)});
  }

  // per-replica estimates, for the stderr across replicas
  std::vector<std::vector<double>> per_replica(replicas,
                                               std::vector<double>(n_cls * times.size(), 0.0));
  double min_window = 0.0;

  const std::size_t nt = times.size();
  std::vector<std::size_t> order(nt);
  for (std::size_t i = 0; i < nt; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  std::vector<double> sorted_times(nt);
  for (std::size_t i = 0; i < nt; ++i) sorted_times[i] = times[order[i]];

  for (std::uint32_t r = 0; r < replicas; ++r) {
    const Seed rs = seed.child(kDensityTask).child(r);
    ParticleSystem sys = sample_system(law, Domain::full_line_palm, n, rs);
    const double half_extent = std::min(-sys.positions().front(), sys.positions().back());
    // One window, safe for the largest requested time, shared by all times:
    // nothing outside it can influence the counts, and per-replica counts
    // stay monotone in t.
    const double window = half_extent - law.v_max() * t_max;
    if (!(window > 0.0)) {
      throw_error(ErrorCode::window_exhausted,
                  "estimate_density: no light-cone-safe window for the largest time; reduce t or increase n");
    }
    min_window = (r == 0) ? window : std::min(min_window, window);

    Outcome outcome = resolve_fast(sys);
    const auto& pos = sys.positions();
    const auto& vel = sys.speeds();
    const auto lo_it = std::lower_bound(pos.begin(), pos.end(), -window);
    const auto hi_it = std::lower_bound(pos.begin(), pos.end(), window);
    const std::size_t i_lo = static_cast<std::size_t>(lo_it - pos.begin());
    const std::size_t i_hi = static_cast<std::size_t>(hi_it - pos.begin());
    const double initial_in_window = static_cast<double>(i_hi - i_lo);
    if (initial_in_window == 0.0) {
      throw_error(ErrorCode::window_exhausted, "estimate_density: empty safe window");
    }

    // alive(t_j) holds on a prefix of the sorted time grid per particle, so
    // one binary search per particle replaces a scan per time point.
    std::vector<std::uint64_t> buckets(n_cls * (nt + 1), 0);
    for (std::size_t i = i_lo; i < i_hi; ++i) {
      const double d = outcome.death_time(i);
      const std::size_t k = static_cast<std::size_t>(
          std::lower_bound(sorted_times.begin(), sorted_times.end(), d) - sorted_times.begin());
      ++buckets[class_index(law, vel[i], kUniformBins) * (nt + 1) + k];
    }
    std::vector<double>& est = per_replica[r];
    for (std::size_t c = 0; c < n_cls; ++c) {
      std::uint64_t alive = 0;
      for (std::size_t k = nt; k > 0; --k) {
        alive += buckets[c * (nt + 1) + k];
        est[c * nt + order[k - 1]] = static_cast<double>(alive) / initial_in_window;
      }
    }
  }

  curve.window_half_width = min_window;
  for (std::size_t c = 0; c < n_cls; ++c) {
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      double mean = 0.0;
      for (std::uint32_t r = 0; r < replicas; ++r) mean += per_replica[r][c * times.size() + ti];
      mean /= replicas;
      double var = 0.0;
      for (std::uint32_t r = 0; r < replicas; ++r) {
        const double d = per_replica[r][c * times.size() + ti] - mean;
        var += d * d;
      }
      curve.classes[c].estimate[ti] = mean;
      curve.classes[c].stderr_[ti] =
          replicas > 1 ? std::sqrt(var / (replicas - 1)) / std::sqrt(static_cast<double>(replicas))
                       : 0.0;
    }
  }
  return curve;
}

DensityReference reference_density(double p, double t, SpeedClass3 cls) {
  if (!(p >= 0.0 && p <= 1.0)) throw_error(ErrorCode::invalid_argument, "reference_density: p outside [0, 1]");
  if (!(t > 0.0)) throw_error(ErrorCode::invalid_argument, "reference_density: t must be > 0");
  const double gamma23 = std::tgamma(2.0 / 3.0);
  const double gamma13 = std::tgamma(1.0 / 3.0);
  const bool critical = std::abs(p - 0.25) <= 1e-6;

  if (cls == SpeedClass3::zero) {
    if (critical) {
      return {std::pow(2.0, 2.0 / 3.0) / (4.0 * gamma23 * gamma23) * std::pow(t, -2.0 / 3.0), false};
    }
    if (p < 0.25) {
      return {2.0 * p / ((1.0 - 4.0 * p) * std::numbers::pi) / t, false};
    }
    return {2.0 - 1.0 / std::sqrt(p), true};
  }
  // +1 and -1 classes are symmetric.
  if (critical) {
    const double amp = std::pow(2.0, 2.0 / 3.0) / (8.0 * gamma23 * gamma23) + 3.0 / (8.0 * gamma13);
    return {amp * std::pow(t, -2.0 / 3.0), false};
  }
  if (p < 0.25) {
    // The quoted subcritical moving-class law; measurements support the
    // t^{-1/2} exponent (see reference_plus_decay_half).
    return {reference_plus_decay_half(p, t), false};
  }
  throw_error(ErrorCode::unavailable,
              "reference_density: the p > 1/4 moving-class decay constants are not available");
}

double reference_plus_decay_half(double p, double t) {
  return std::sqrt((0.25 - p) / std::numbers::pi) / std::sqrt(t);
}

double reference_plus_decay_one(double p, double t) {
  return std::sqrt((0.25 - p) / std::numbers::pi) / t;
}

ExponentFit fit_exponent(const DensityCurve& curve, double cls, double t_lo, double t_hi) {
  const DensityCurve::ClassCurve* cc = curve.find_class(cls);
  if (cc == nullptr) throw_error(ErrorCode::invalid_argument, "fit_exponent: unknown speed class");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    const double t = curve.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double e = cc->estimate[i];
    if (!(e > 0.0)) {
      throw_error(ErrorCode::nonpositive_density, "fit_exponent: nonpositive density in fit range");
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(e));
  }
  if (lx.size() < 3) {
    throw_error(ErrorCode::insufficient_points, "fit_exponent: need at least 3 grid points in range");
  }
  const auto m = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }
  const double se = lx.size() > 2 ? std::sqrt(ss_res / (m - 2.0) / sxx) : 0.0;
  return ExponentFit{slope, se, lx.size()};
}

void wilson_interval(std::uint64_t successes, std::uint64_t trials, double& lo, double& hi) {
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
  // x = 0 and x = n pin the corresponding endpoint exactly
  lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  hi = successes == trials ? 1.0 : std::min(1.0, center + half);
}

namespace {

bool origin_alive_replica(const SpeedLaw& law, Domain domain, std::optional<double> v0,
                          std::size_t n, double horizon, Seed rs) {
  ParticleSystem sys = sample_system(law, domain, n, rs);
  const std::size_t origin = domain == Domain::full_line_palm ? sys.origin_index() : 0;
  if (v0) sys.set_speed(origin, *v0);
  const double extent = domain == Domain::full_line_palm
                            ? std::min(-sys.positions().front(), sys.positions().back())
                            : sys.positions().back();
  if (!(horizon <= extent / (2.0 * law.v_max()))) {
    throw_error(ErrorCode::unsafe_horizon,
                "estimate_survival: horizon exceeds extent/(2 v_max); the origin could be "
                "influenced by unseen particles");
  }
  Outcome outcome = resolve_fast(sys);
  return outcome.death_time(origin) > horizon;
}

}  // namespace

SurvivalEstimate estimate_survival(const SpeedLaw& law, Domain domain, std::optional<double> v0,
                                   std::size_t n, double horizon, std::uint32_t replicas,
                                   Seed seed) {
  if (replicas == 0) throw_error(ErrorCode::invalid_argument, "estimate_survival: replicas must be >= 1");
  if (!(horizon > 0.0)) throw_error(ErrorCode::invalid_argument, "estimate_survival: horizon must be > 0");
  if (law.v_max() <= 0.0) {
    // Degenerate law with only standing particles: everyone survives.
    return SurvivalEstimate{1.0, 1.0, 1.0, horizon, replicas};
  }
  std::uint64_t alive = 0;
  for (std::uint32_t r = 0; r < replicas; ++r) {
    if (origin_alive_replica(law, domain, v0, n, horizon, seed.child(kSurvivalTask).child(r))) {
      ++alive;
    }
  }
  SurvivalEstimate est;
  est.p_hat = static_cast<double>(alive) / static_cast<double>(replicas);
  wilson_interval(alive, replicas, est.ci_lo, est.ci_hi);
  est.horizon = horizon;
  est.replicas = replicas;
  return est;
}

SweepResult sweep(const std::vector<double>& grid, Seed seed, const SweepOptions& options) {
  if (grid.empty()) throw_error(ErrorCode::invalid_argument, "sweep: empty grid");
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (!(grid[g - 1] < grid[g])) throw_error(ErrorCode::invalid_argument, "sweep: grid must be strictly increasing");
  }

  SweepResult result;
  result.grid = grid;
  result.points.resize(grid.size());

  const double horizon = options.horizon > 0.0
                             ? options.horizon
                             : 0.4 * static_cast<double>(options.n);

  // Survival replicas fan out as independent (grid point, replica) tasks;
  // results land in slots indexed by task, so aggregation order and
  // therefore output bits do not depend on the thread count.
  const std::size_t tasks = grid.size() * options.replicas;
  std::vector<std::uint8_t> alive_flags(tasks, 0);
  std::atomic<std::size_t> next_task{0};
  const std::uint32_t workers =
      std::max<std::uint32_t>(1, std::min<std::uint32_t>(options.parallelism,
                                                         static_cast<std::uint32_t>(tasks)));

  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= tasks) return;
      const std::size_t g = task / options.replicas;
      const std::uint32_t r = static_cast<std::uint32_t>(task % options.replicas);
      const SpeedLaw law = three_speed(grid[g]);
      const Seed rs = seed.child(kSweepTask).child(g).child(kSurvivalTask).child(r);
      alive_flags[task] =
          origin_alive_replica(law, Domain::full_line_palm, 0.0, options.n, horizon, rs) ? 1 : 0;
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::uint32_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Clamp the exponent-fit window to the horizon so small runs keep healthy
  // alive counts at the largest fitted time.
  const double fit_hi = std::min(options.fit_t_hi, horizon);
  const double fit_lo = std::min(options.fit_t_lo, fit_hi / 10.0);

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepPoint& pt = result.points[g];
    pt.p = grid[g];
    std::uint64_t alive = 0;
    for (std::uint32_t r = 0; r < options.replicas; ++r) alive += alive_flags[g * options.replicas + r];
    pt.survival.p_hat = static_cast<double>(alive) / options.replicas;
    wilson_interval(alive, options.replicas, pt.survival.ci_lo, pt.survival.ci_hi);
    pt.survival.horizon = horizon;
    pt.survival.replicas = options.replicas;

    const SpeedLaw law = three_speed(grid[g]);
    DensityCurve curve = estimate_density(law, options.n, geometric_times(fit_lo, fit_hi),
                                          options.density_replicas,
                                          seed.child(kSweepTask).child(g).child(kDensityTask));
    const ExponentFit fit = fit_exponent(curve, 0.0, fit_lo, fit_hi);
    pt.exponent = fit.slope;
    pt.exponent_stderr = fit.stderr_;
    pt.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return result;
}

}  // namespace ballistic
