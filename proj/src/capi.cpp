// SPDX-License-Identifier: Apache-2.0
#include "ballistic.h"

#include <cstring>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "ballistic/engine.hpp"
#include "ballistic/errors.hpp"
#include "ballistic/explore.hpp"
#include "ballistic/model.hpp"
#include "ballistic/stats.hpp"

using namespace ballistic;

struct ba_law {
  SpeedLaw law;
};
struct ba_system {
  ParticleSystem sys;
};
struct ba_outcome {
  Outcome outcome;
};
struct ba_trace {
  ExplorationTrace trace;
};
struct ba_density {
  DensityCurve curve;
};
struct ba_sweep {
  SweepResult result;
};

namespace {

thread_local std::string g_last_error;

ba_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return BA_EINVAL;
    case ErrorCode::exact_tie: return BA_EXACT_TIE;
    case ErrorCode::start_coincidence: return BA_START_COINCIDENCE;
    case ErrorCode::no_bracket: return BA_NO_BRACKET;
    case ErrorCode::window_exhausted: return BA_WINDOW_EXHAUSTED;
    case ErrorCode::unsafe_horizon: return BA_UNSAFE_HORIZON;
    case ErrorCode::insufficient_points: return BA_INSUFFICIENT_POINTS;
    case ErrorCode::nonpositive_density: return BA_NONPOSITIVE_DENSITY;
    case ErrorCode::unavailable: return BA_UNAVAILABLE;
    case ErrorCode::internal: return BA_INTERNAL;
  }
  return BA_INTERNAL;
}

template <class Fn>
ba_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BA_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BA_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BA_INTERNAL;
  }
}

ba_status einval(const char* what) {
  g_last_error = what;
  return BA_EINVAL;
}

Domain to_domain(ba_domain d) {
  return d == BA_DOMAIN_HALF_LINE ? Domain::half_line : Domain::full_line_palm;
}

}  // namespace

extern "C" {

const char* ba_version(void) { return "1.0.0"; }

const char* ba_status_name(ba_status status) {
  switch (status) {
    case BA_OK: return "ok";
    case BA_EINVAL: return "invalid argument";
    case BA_EXACT_TIE: return "exact tie";
    case BA_START_COINCIDENCE: return "start coincidence";
    case BA_NO_BRACKET: return "no bracket";
    case BA_WINDOW_EXHAUSTED: return "window exhausted";
    case BA_UNSAFE_HORIZON: return "unsafe horizon";
    case BA_INSUFFICIENT_POINTS: return "insufficient points";
    case BA_NONPOSITIVE_DENSITY: return "nonpositive density";
    case BA_UNAVAILABLE: return "unavailable";
    case BA_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* ba_last_error(void) { return g_last_error.c_str(); }

/* ---- laws ---- */

ba_status ba_law_three_speed(double p, ba_law** out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = new ba_law{three_speed(p)}; });
}

ba_status ba_law_discrete(const double* speeds, const double* weights, size_t n_atoms,
                          ba_law** out) {
  if (out == nullptr || speeds == nullptr || weights == nullptr) return einval("null argument");
  return guarded([&] {
    std::vector<Atom> atoms(n_atoms);
    for (size_t i = 0; i < n_atoms; ++i) atoms[i] = Atom{speeds[i], weights[i]};
    *out = new ba_law{SpeedLaw::discrete(std::move(atoms))};
  });
}

ba_status ba_law_uniform(double lo, double hi, ba_law** out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = new ba_law{SpeedLaw::uniform_interval(lo, hi)}; });
}

double ba_law_v_max(const ba_law* law) { return law != nullptr ? law->law.v_max() : 0.0; }

void ba_law_free(ba_law* law) { delete law; }

/* ---- systems ---- */

ba_status ba_system_sample(const ba_law* law, ba_domain domain, uint64_t n, uint64_t seed_master,
                           uint64_t seed_replica, ba_system** out) {
  if (law == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] {
    *out = new ba_system{
        sample_system(law->law, to_domain(domain), n, Seed{seed_master, seed_replica})};
  });
}

ba_status ba_system_create(const double* positions, const double* speeds, size_t n,
                           ba_domain domain, size_t origin_index, ba_system** out) {
  if (positions == nullptr || speeds == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] {
    *out = new ba_system{ParticleSystem(std::vector<double>(positions, positions + n),
                                        std::vector<double>(speeds, speeds + n),
                                        to_domain(domain), origin_index)};
  });
}

ba_status ba_system_bullets(const double* release_times, const double* bullet_speeds, size_t n,
                            double alpha, double beta, ba_system** out) {
  if (release_times == nullptr || bullet_speeds == nullptr || out == nullptr) {
    return einval("null argument");
  }
  return guarded([&] {
    *out = new ba_system{
        bullet_to_ballistic(std::vector<double>(release_times, release_times + n),
                            std::vector<double>(bullet_speeds, bullet_speeds + n), alpha, beta)};
  });
}

ba_status ba_system_affine(const ba_system* sys, double a, double b, ba_system** out) {
  if (sys == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = new ba_system{apply_affine(sys->sys, a, b)}; });
}

ba_status ba_system_reflect(const ba_system* sys, ba_system** out) {
  if (sys == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = new ba_system{reflect(sys->sys)}; });
}

size_t ba_system_size(const ba_system* sys) { return sys != nullptr ? sys->sys.size() : 0; }

const double* ba_system_positions(const ba_system* sys) {
  return sys != nullptr ? sys->sys.positions().data() : nullptr;
}

const double* ba_system_speeds(const ba_system* sys) {
  return sys != nullptr ? sys->sys.speeds().data() : nullptr;
}

ba_domain ba_system_domain(const ba_system* sys) {
  return sys != nullptr && sys->sys.domain() == Domain::half_line ? BA_DOMAIN_HALF_LINE
                                                                  : BA_DOMAIN_FULL_LINE_PALM;
}

size_t ba_system_origin_index(const ba_system* sys) {
  if (sys == nullptr || sys->sys.domain() != Domain::full_line_palm) return static_cast<size_t>(-1);
  return sys->sys.origin_index();
}

ba_status ba_system_set_speed(ba_system* sys, size_t index, double speed) {
  if (sys == nullptr) return einval("null argument");
  return guarded([&] { sys->sys.set_speed(index, speed); });
}

void ba_system_free(ba_system* sys) { delete sys; }

/* ---- resolution ---- */

ba_status ba_resolve(const ba_system* sys, ba_outcome** out) {
  if (sys == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = new ba_outcome{resolve_fast(sys->sys)}; });
}

ba_status ba_resolve_oracle(const ba_system* sys, ba_outcome** out) {
  if (sys == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = new ba_outcome{resolve_oracle(sys->sys)}; });
}

size_t ba_outcome_size(const ba_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.size() : 0;
}

const double* ba_outcome_death_times(const ba_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.death_times().data() : nullptr;
}

const int32_t* ba_outcome_partners(const ba_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.partners().data() : nullptr;
}

const double* ba_outcome_death_positions(const ba_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.death_positions().data() : nullptr;
}

size_t ba_outcome_collision_count(const ba_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.collisions().size() : 0;
}

ba_status ba_outcome_collision(const ba_outcome* outcome, size_t index, uint32_t* left,
                               uint32_t* right, double* time, double* position) {
  if (outcome == nullptr) return einval("null argument");
  if (index >= outcome->outcome.collisions().size()) return einval("collision index out of range");
  const Collision& c = outcome->outcome.collisions()[index];
  if (left != nullptr) *left = c.left;
  if (right != nullptr) *right = c.right;
  if (time != nullptr) *time = c.time;
  if (position != nullptr) *position = c.position;
  return BA_OK;
}

void ba_outcome_free(ba_outcome* outcome) { delete outcome; }

ba_status ba_pairs_over(const ba_outcome* outcome, const ba_system* sys, double x, uint64_t* out) {
  if (outcome == nullptr || sys == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = pairs_over(outcome->outcome, sys->sys, x); });
}

ba_status ba_crossings_of_zero(const ba_system* sys, const ba_outcome* outcome, double horizon,
                               uint64_t* out) {
  if (sys == nullptr || outcome == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = crossings_of_zero(sys->sys, outcome->outcome, horizon); });
}

ba_status ba_alive_at(const ba_system* sys, const ba_outcome* outcome, double t, double* positions,
                      double* speeds, size_t capacity, size_t* count) {
  if (sys == nullptr || outcome == nullptr || count == nullptr) return einval("null argument");
  return guarded([&] {
    const std::vector<AliveParticle> alive = alive_at(sys->sys, outcome->outcome, t);
    *count = alive.size();
    if (positions == nullptr && speeds == nullptr) return;
    if (alive.size() > capacity) {
      throw_error(ErrorCode::invalid_argument, "ba_alive_at: insufficient capacity");
    }
    for (size_t i = 0; i < alive.size(); ++i) {
      if (positions != nullptr) positions[i] = alive[i].position;
      if (speeds != nullptr) speeds[i] = alive[i].speed;
    }
  });
}

/* ---- exploration ---- */

ba_status ba_explore(const ba_system* sys, uint64_t max_steps, ba_trace** out) {
  if (sys == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = new ba_trace{explore(sys->sys, max_steps)}; });
}

size_t ba_trace_steps(const ba_trace* trace) { return trace != nullptr ? trace->trace.steps() : 0; }

const uint32_t* ba_trace_locations(const ba_trace* trace) {
  return trace != nullptr ? trace->trace.locations.data() : nullptr;
}

const int8_t* ba_trace_eps(const ba_trace* trace) {
  return trace != nullptr ? trace->trace.eps.data() : nullptr;
}

const int8_t* ba_trace_eps_tilde(const ba_trace* trace) {
  return trace != nullptr ? trace->trace.eps_tilde.data() : nullptr;
}

const int64_t* ba_trace_partial_sums(const ba_trace* trace) {
  return trace != nullptr ? trace->trace.partial_sums.data() : nullptr;
}

int ba_trace_incomplete(const ba_trace* trace) {
  return trace != nullptr && trace->trace.incomplete() ? 1 : 0;
}

void ba_trace_free(ba_trace* trace) { delete trace; }

ba_status ba_survivor_balance(const ba_system* sys, const ba_outcome* prefix_outcome, size_t upto,
                              int64_t* out) {
  if (sys == nullptr || prefix_outcome == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] { *out = survivor_balance(sys->sys, prefix_outcome->outcome, upto); });
}

/* ---- drift ---- */

ba_status ba_drift_single(double p, double* out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = drift_single(p); });
}

ba_status ba_drift_block(double p, double* out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = drift_block(p); });
}

ba_status ba_critical_root_single(double* out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = critical_root([](double p) { return drift_single(p); }, 0.0, 1.0); });
}

ba_status ba_critical_root_block(double* out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = critical_root([](double p) { return drift_block(p); }, 0.0, 1.0); });
}

ba_status ba_walk_survival_bound(double p, double* out) {
  if (out == nullptr) return einval("out must not be null");
  return guarded([&] { *out = walk_survival_bound(p); });
}

/* ---- statistics ---- */

ba_status ba_density_run(const ba_law* law, uint64_t n, const double* times, size_t n_times,
                         uint32_t replicas, uint64_t seed_master, uint64_t seed_replica,
                         ba_density** out) {
  if (law == nullptr || times == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] {
    *out = new ba_density{estimate_density(law->law, n, std::vector<double>(times, times + n_times),
                                           replicas, Seed{seed_master, seed_replica})};
  });
}

size_t ba_density_num_classes(const ba_density* density) {
  return density != nullptr ? density->curve.classes.size() : 0;
}

size_t ba_density_num_times(const ba_density* density) {
  return density != nullptr ? density->curve.times.size() : 0;
}

const double* ba_density_times(const ba_density* density) {
  return density != nullptr ? density->curve.times.data() : nullptr;
}

double ba_density_class_speed(const ba_density* density, size_t cls) {
  if (density == nullptr || cls >= density->curve.classes.size()) return 0.0;
  return density->curve.classes[cls].speed;
}

ba_status ba_density_estimate(const ba_density* density, size_t cls, size_t time_index,
                              double* estimate, double* stderr_out) {
  if (density == nullptr) return einval("null argument");
  if (cls >= density->curve.classes.size()) return einval("class index out of range");
  if (time_index >= density->curve.times.size()) return einval("time index out of range");
  if (estimate != nullptr) *estimate = density->curve.classes[cls].estimate[time_index];
  if (stderr_out != nullptr) *stderr_out = density->curve.classes[cls].stderr_[time_index];
  return BA_OK;
}

double ba_density_window_half_width(const ba_density* density) {
  return density != nullptr ? density->curve.window_half_width : 0.0;
}

void ba_density_free(ba_density* density) { delete density; }

ba_status ba_fit_exponent(const double* times, const double* estimates, size_t n, double t_lo,
                          double t_hi, double* slope, double* slope_stderr) {
  if (times == nullptr || estimates == nullptr || slope == nullptr) return einval("null argument");
  return guarded([&] {
    DensityCurve curve;
    curve.times.assign(times, times + n);
    curve.classes.push_back({0.0, std::vector<double>(estimates, estimates + n),
                             std::vector<double>(n, 0.0)});
    curve.replicas = 1;
    const ExponentFit fit = fit_exponent(curve, 0.0, t_lo, t_hi);
    *slope = fit.slope;
    if (slope_stderr != nullptr) *slope_stderr = fit.stderr_;
  });
}

ba_status ba_reference_density(double p, double t, int speed_class, double* value, int* is_limit) {
  if (value == nullptr) return einval("value must not be null");
  if (speed_class != -1 && speed_class != 0 && speed_class != 1) {
    return einval("speed_class must be -1, 0 or +1");
  }
  return guarded([&] {
    const SpeedClass3 cls = speed_class == 0 ? SpeedClass3::zero
                            : speed_class > 0 ? SpeedClass3::plus_one
                                              : SpeedClass3::minus_one;
    const DensityReference ref = reference_density(p, t, cls);
    *value = ref.value;
    if (is_limit != nullptr) *is_limit = ref.is_limit ? 1 : 0;
  });
}

ba_status ba_survival_run(const ba_law* law, ba_domain domain, int conditioned, double v0,
                          uint64_t n, double horizon, uint32_t replicas, uint64_t seed_master,
                          uint64_t seed_replica, double* p_hat, double* ci_lo, double* ci_hi) {
  if (law == nullptr || p_hat == nullptr) return einval("null argument");
  return guarded([&] {
    const std::optional<double> cond = conditioned != 0 ? std::optional<double>(v0) : std::nullopt;
    const SurvivalEstimate est = estimate_survival(law->law, to_domain(domain), cond, n, horizon,
                                                   replicas, Seed{seed_master, seed_replica});
    *p_hat = est.p_hat;
    if (ci_lo != nullptr) *ci_lo = est.ci_lo;
    if (ci_hi != nullptr) *ci_hi = est.ci_hi;
  });
}

ba_status ba_sweep_run(const double* grid, size_t n_grid, uint64_t n, double horizon,
                       uint32_t replicas, uint32_t density_replicas, uint64_t seed_master,
                       uint64_t seed_replica, uint32_t parallelism, ba_sweep** out) {
  if (grid == nullptr || out == nullptr) return einval("null argument");
  return guarded([&] {
    SweepOptions options;
    options.n = n;
    options.horizon = horizon;
    options.replicas = replicas;
    options.density_replicas = density_replicas;
    options.parallelism = parallelism;
    *out = new ba_sweep{
        sweep(std::vector<double>(grid, grid + n_grid), Seed{seed_master, seed_replica}, options)};
  });
}

size_t ba_sweep_size(const ba_sweep* sweep) {
  return sweep != nullptr ? sweep->result.points.size() : 0;
}

ba_status ba_sweep_point(const ba_sweep* sweep, size_t index, double* p, double* survival,
                         double* ci_lo, double* ci_hi, double* exponent, double* exponent_stderr,
                         double* runtime_seconds) {
  if (sweep == nullptr) return einval("null argument");
  if (index >= sweep->result.points.size()) return einval("sweep index out of range");
  const SweepPoint& pt = sweep->result.points[index];
  if (p != nullptr) *p = pt.p;
  if (survival != nullptr) *survival = pt.survival.p_hat;
  if (ci_lo != nullptr) *ci_lo = pt.survival.ci_lo;
  if (ci_hi != nullptr) *ci_hi = pt.survival.ci_hi;
  if (exponent != nullptr) *exponent = pt.exponent;
  if (exponent_stderr != nullptr) *exponent_stderr = pt.exponent_stderr;
  if (runtime_seconds != nullptr) *runtime_seconds = pt.runtime_seconds;
  return BA_OK;
}

void ba_sweep_free(ba_sweep* sweep) { delete sweep; }

} /* extern "C" */
