// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_ENGINE_HPP
#define BALLISTIC_ENGINE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ballistic/model.hpp"

namespace ballistic {

/// Per-particle fate view.
struct Fate {
  bool annihilated = false;
  std::int32_t partner = -1;    // valid when annihilated
  double time = 0.0;            // collision time, > 0
  double position = 0.0;        // collision position
};

struct Collision {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double time = 0.0;
  double position = 0.0;
};

/// The collision matching for one resolved system: an involution on indices
/// in which matched pairs never interleave and the left member is always the
/// faster one.
class Outcome {
 public:
  Outcome(std::vector<double> death_times, std::vector<std::int32_t> partners,
          std::vector<double> death_positions, std::vector<Collision> collisions)
      : death_times_(std::move(death_times)), partners_(std::move(partners)),
        death_positions_(std::move(death_positions)), collisions_(std::move(collisions)) {}

  std::size_t size() const noexcept { return death_times_.size(); }
  bool alive(std::size_t i) const noexcept { return partners_[i] < 0; }
  double death_time(std::size_t i) const noexcept { return death_times_[i]; }  // +inf if alive
  std::int32_t partner(std::size_t i) const noexcept { return partners_[i]; }  // -1 if alive
  Fate fate(std::size_t i) const noexcept {
    if (alive(i)) return Fate{};
    return Fate{true, partners_[i], death_times_[i], death_positions_[i]};
  }

  const std::vector<double>& death_times() const noexcept { return death_times_; }
  const std::vector<std::int32_t>& partners() const noexcept { return partners_; }
  const std::vector<double>& death_positions() const noexcept { return death_positions_; }
  /// Collisions in chronological order.
  const std::vector<Collision>& collisions() const noexcept { return collisions_; }

 private:
  std::vector<double> death_times_;
  std::vector<std::int32_t> partners_;
  std::vector<double> death_positions_;
  std::vector<Collision> collisions_;
};

/// Ground-truth resolver: repeatedly executes the chronologically first
/// collision among alive adjacent approaching pairs. O(N^2); the oracle the
/// fast resolver is differentially tested against.
Outcome resolve_oracle(const ParticleSystem& sys);
Outcome resolve_oracle(std::span<const double> positions, std::span<const double> speeds);

/// Event-driven resolver: doubly linked alive-neighbor structure plus a
/// min-priority queue of candidate adjacent-pair collisions with lazy
/// invalidation of stale events. O(N log N). Produces the identical Outcome
/// to resolve_oracle on every tie-free input; both raise ErrorCode::exact_tie
/// when two distinct candidate collisions share a time to the last bit.
Outcome resolve_fast(const ParticleSystem& sys);
Outcome resolve_fast(std::span<const double> positions, std::span<const double> speeds);

/// Survivors of the resolved system, bypassing Outcome construction.
/// zeros/minus_ones count alive particles with speed exactly 0 / exactly -1.
struct SurvivorCounts {
  std::size_t alive = 0;
  std::size_t zeros = 0;
  std::size_t minus_ones = 0;
};
SurvivorCounts resolve_survivor_counts(std::span<const double> positions,
                                       std::span<const double> speeds);

/// Number of matched pairs (i, j) with x_i < x < x_j. Throws
/// ErrorCode::start_coincidence when x equals a starting position.
std::size_t pairs_over(const Outcome& outcome, const ParticleSystem& sys, double x);

/// Number of particles with negative speed whose trajectory reaches 0 before
/// min(death time, horizon). Half-line systems only.
std::size_t crossings_of_zero(const ParticleSystem& sys, const Outcome& outcome, double horizon);

/// Positions and speeds of particles alive at time t, in increasing position
/// order.
struct AliveParticle {
  double position = 0.0;
  double speed = 0.0;
};
std::vector<AliveParticle> alive_at(const ParticleSystem& sys, const Outcome& outcome, double t);

/// Checks every structural Outcome invariant (involution, v_left > v_right,
/// laminar non-crossing, nested pairs strictly earlier, fully matched
/// interiors, trajectory consistency within 1e-9 relative) and throws
/// ErrorCode::internal on the first violation.
void validate_outcome(const ParticleSystem& sys, const Outcome& outcome);

}  // namespace ballistic

#endif
