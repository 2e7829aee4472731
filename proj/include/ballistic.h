/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the ballistic annihilation toolkit: one-dimensional
 * constant-speed particles that mutually annihilate on contact.
 *
 * All entry points that can fail return a ba_status; out-parameters are only
 * written on BA_OK. Handles are opaque and freed with their matching
 * ba_*_free function. Pointers returned by accessor functions borrow from
 * the handle and stay valid until it is freed. A per-thread message for the
 * most recent failure is available from ba_last_error().
 */
#ifndef BALLISTIC_H
#define BALLISTIC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ba_status {
  BA_OK = 0,
  BA_EINVAL = 1,             /* bad argument or precondition */
  BA_EXACT_TIE = 2,          /* two candidate collisions share a time exactly */
  BA_START_COINCIDENCE = 3,  /* query point coincides with a particle start */
  BA_NO_BRACKET = 4,         /* root bracket does not change sign */
  BA_WINDOW_EXHAUSTED = 5,   /* no light-cone-safe window for a requested time */
  BA_UNSAFE_HORIZON = 6,     /* horizon exceeds extent/(2 v_max) */
  BA_INSUFFICIENT_POINTS = 7,
  BA_NONPOSITIVE_DENSITY = 8,
  BA_UNAVAILABLE = 9,        /* reference value not available in this regime */
  BA_INTERNAL = 10,
} ba_status;

typedef enum ba_domain {
  BA_DOMAIN_FULL_LINE_PALM = 0, /* particle at 0, n on each side */
  BA_DOMAIN_HALF_LINE = 1,      /* all particles in (0, inf) */
} ba_domain;

typedef struct ba_law ba_law;
typedef struct ba_system ba_system;
typedef struct ba_outcome ba_outcome;
typedef struct ba_trace ba_trace;
typedef struct ba_density ba_density;
typedef struct ba_sweep ba_sweep;

const char* ba_version(void);
const char* ba_status_name(ba_status status);
/* Message of the most recent failing call on this thread ("" if none). */
const char* ba_last_error(void);

/* ---- speed laws ---- */

/* Symmetric three-speed law: atoms (-1,(1-p)/2), (0,p), (+1,(1-p)/2). */
ba_status ba_law_three_speed(double p, ba_law** out);
/* Discrete law from strictly increasing speeds and weights summing to 1. */
ba_status ba_law_discrete(const double* speeds, const double* weights, size_t n_atoms,
                          ba_law** out);
ba_status ba_law_uniform(double lo, double hi, ba_law** out);
double ba_law_v_max(const ba_law* law);
void ba_law_free(ba_law* law);

/* ---- particle systems ---- */

/* Poisson-seeded system: unit-exponential gaps, i.i.d. speeds from the law.
 * Identical seeds give bit-identical systems. */
ba_status ba_system_sample(const ba_law* law, ba_domain domain, uint64_t n, uint64_t seed_master,
                           uint64_t seed_replica, ba_system** out);
/* Explicit system; origin_index is required for BA_DOMAIN_FULL_LINE_PALM and
 * ignored for half-line systems. */
ba_status ba_system_create(const double* positions, const double* speeds, size_t n,
                           ba_domain domain, size_t origin_index, ba_system** out);
/* Bullet-problem map: bullets released at the given times with speeds w
 * become half-line particles with speeds 1/(alpha + beta*w). */
ba_status ba_system_bullets(const double* release_times, const double* bullet_speeds, size_t n,
                            double alpha, double beta, ba_system** out);
/* Speeds become a*v + b (a != 0); the matching is invariant for a > 0. */
ba_status ba_system_affine(const ba_system* sys, double a, double b, ba_system** out);
/* Space reflection; half-line systems are translated back into (0, inf). */
ba_status ba_system_reflect(const ba_system* sys, ba_system** out);

size_t ba_system_size(const ba_system* sys);
const double* ba_system_positions(const ba_system* sys);
const double* ba_system_speeds(const ba_system* sys);
ba_domain ba_system_domain(const ba_system* sys);
/* Index of the particle at 0, or (size_t)-1 for half-line systems. */
size_t ba_system_origin_index(const ba_system* sys);
/* Force one particle's speed (conditioned-survival runs). */
ba_status ba_system_set_speed(ba_system* sys, size_t index, double speed);
void ba_system_free(ba_system* sys);

/* ---- collision resolution ---- */

/* Event-driven resolver, O(N log N). */
ba_status ba_resolve(const ba_system* sys, ba_outcome** out);
/* Brute-force chronological oracle, O(N^2); identical output on tie-free
 * inputs. */
ba_status ba_resolve_oracle(const ba_system* sys, ba_outcome** out);

size_t ba_outcome_size(const ba_outcome* outcome);
/* Death time per particle; +infinity marks survivors. */
const double* ba_outcome_death_times(const ba_outcome* outcome);
/* Annihilation partner per particle; -1 marks survivors. */
const int32_t* ba_outcome_partners(const ba_outcome* outcome);
const double* ba_outcome_death_positions(const ba_outcome* outcome);
size_t ba_outcome_collision_count(const ba_outcome* outcome);
/* Collisions are indexed in chronological order. */
ba_status ba_outcome_collision(const ba_outcome* outcome, size_t index, uint32_t* left,
                               uint32_t* right, double* time, double* position);
void ba_outcome_free(ba_outcome* outcome);

/* Number of matched pairs whose starting positions straddle x. */
ba_status ba_pairs_over(const ba_outcome* outcome, const ba_system* sys, double x, uint64_t* out);
/* Negative-speed particles reaching 0 before min(death, horizon); half-line
 * systems only. */
ba_status ba_crossings_of_zero(const ba_system* sys, const ba_outcome* outcome, double horizon,
                               uint64_t* out);
/* Alive particles at time t in increasing position order. Pass NULL buffers
 * to query the count. Fails with BA_EINVAL when capacity is too small. */
ba_status ba_alive_at(const ba_system* sys, const ba_outcome* outcome, double t, double* positions,
                      double* speeds, size_t capacity, size_t* count);

/* ---- exploration walk ---- */

/* Left-to-right exploration of a half-line three-speed system. */
ba_status ba_explore(const ba_system* sys, uint64_t max_steps, ba_trace** out);
size_t ba_trace_steps(const ba_trace* trace);
/* steps + 1 stopping locations; for complete traces the last equals the
 * particle count. */
const uint32_t* ba_trace_locations(const ba_trace* trace);
const int8_t* ba_trace_eps(const ba_trace* trace);
const int8_t* ba_trace_eps_tilde(const ba_trace* trace);
const int64_t* ba_trace_partial_sums(const ba_trace* trace);
/* Nonzero when the walk was truncated (step cap, or a +1 survived the finite
 * sample). */
int ba_trace_incomplete(const ba_trace* trace);
void ba_trace_free(ba_trace* trace);

/* (# alive speed-0) - (# alive speed -1) among indices [0, upto) of a
 * resolved prefix. */
ba_status ba_survivor_balance(const ba_system* sys, const ba_outcome* prefix_outcome,
                              size_t upto, int64_t* out);

/* ---- drift functions and thresholds ---- */

ba_status ba_drift_single(double p, double* out);
ba_status ba_drift_block(double p, double* out);
/* Root of drift_single: 1/3. */
ba_status ba_critical_root_single(double* out);
/* Root of the 3-by-3 block drift: 0.32803... */
ba_status ba_critical_root_block(double* out);
ba_status ba_walk_survival_bound(double p, double* out);

/* ---- Monte Carlo statistics ---- */

ba_status ba_density_run(const ba_law* law, uint64_t n, const double* times, size_t n_times,
                         uint32_t replicas, uint64_t seed_master, uint64_t seed_replica,
                         ba_density** out);
size_t ba_density_num_classes(const ba_density* density);
size_t ba_density_num_times(const ba_density* density);
const double* ba_density_times(const ba_density* density);
double ba_density_class_speed(const ba_density* density, size_t cls);
ba_status ba_density_estimate(const ba_density* density, size_t cls, size_t time_index,
                              double* estimate, double* stderr_out);
double ba_density_window_half_width(const ba_density* density);
void ba_density_free(ba_density* density);

/* Log-log OLS slope over grid points with t in [t_lo, t_hi]. */
ba_status ba_fit_exponent(const double* times, const double* estimates, size_t n, double t_lo,
                          double t_hi, double* slope, double* slope_stderr);

/* Quoted three-speed asymptotics; speed_class is -1, 0 or +1. is_limit is
 * set when the value is a t-independent limit constant. */
ba_status ba_reference_density(double p, double t, int speed_class, double* value, int* is_limit);

/* Origin-survival estimate. conditioned != 0 forces the origin speed to v0.
 * Wilson 95% interval. */
ba_status ba_survival_run(const ba_law* law, ba_domain domain, int conditioned, double v0,
                          uint64_t n, double horizon, uint32_t replicas, uint64_t seed_master,
                          uint64_t seed_replica, double* p_hat, double* ci_lo, double* ci_hi);

/* Phase sweep over a strictly increasing grid of three-speed parameters.
 * horizon <= 0 selects the default safe horizon. Results are independent of
 * the parallelism degree. */
ba_status ba_sweep_run(const double* grid, size_t n_grid, uint64_t n, double horizon,
                       uint32_t replicas, uint32_t density_replicas, uint64_t seed_master,
                       uint64_t seed_replica, uint32_t parallelism, ba_sweep** out);
size_t ba_sweep_size(const ba_sweep* sweep);
ba_status ba_sweep_point(const ba_sweep* sweep, size_t index, double* p, double* survival,
                         double* ci_lo, double* ci_hi, double* exponent, double* exponent_stderr,
                         double* runtime_seconds);
void ba_sweep_free(ba_sweep* sweep);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BALLISTIC_H */
