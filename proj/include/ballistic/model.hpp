// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_MODEL_HPP
#define BALLISTIC_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ballistic/rng.hpp"

namespace ballistic {

/// One atom of a discrete speed law.
struct Atom {
  double speed = 0.0;
  double weight = 0.0;
};

/// Bounded-support speed distribution: either discrete atoms (strictly
/// increasing speeds, weights summing to 1, zero-weight atoms elided) or a
/// uniform interval.
class SpeedLaw {
 public:
  enum class Kind { discrete, uniform_interval };

  static SpeedLaw discrete(std::vector<Atom> atoms);
  static SpeedLaw uniform_interval(double lo, double hi);

  Kind kind() const noexcept { return kind_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double v_max() const noexcept { return v_max_; }

  double sample(Rng& rng) const;

  /// True when the support is a subset of {-1, 0, +1} (exactly).
  bool is_three_speed_support() const noexcept;

 private:
  friend SpeedLaw three_speed(double p);
  SpeedLaw() = default;
  Kind kind_ = Kind::discrete;
  std::vector<Atom> atoms_;       // discrete only
  std::vector<double> cdf_;       // cumulative weights, discrete only
  double lo_ = 0.0, hi_ = 0.0;    // uniform only
  double v_max_ = 0.0;
};

/// Symmetric three-speed law (-1, (1-p)/2), (0, p), (+1, (1-p)/2).
/// v_max is pinned to 1 for every p, including p = 1, so that light-cone
/// windows stay uniform across a parameter sweep.
SpeedLaw three_speed(double p);

enum class Domain {
  full_line_palm,  // one particle at position exactly 0, n on each side
  half_line,       // all particles in (0, inf)
};

/// Ordered starting positions plus speeds on a unit-intensity scale.
class ParticleSystem {
 public:
  ParticleSystem(std::vector<double> positions, std::vector<double> speeds, Domain domain,
                 std::size_t origin_index = 0);

  const std::vector<double>& positions() const noexcept { return positions_; }
  const std::vector<double>& speeds() const noexcept { return speeds_; }
  Domain domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return positions_.size(); }
  /// Index of the particle at position 0 (full-line Palm domains only).
  std::size_t origin_index() const noexcept { return origin_index_; }

  /// Replaces the speed at one index (used for conditioned survival runs).
  void set_speed(std::size_t i, double v);

 private:
  std::vector<double> positions_;
  std::vector<double> speeds_;
  Domain domain_;
  std::size_t origin_index_;
};

/// Poisson-seeded configuration. Half-line: n particles, positions are
/// partial sums of i.i.d. Exp(1) gaps. Full-line Palm: an origin particle at
/// 0 and n particles on each side, gap sequences drawn from disjoint
/// substreams. Speeds are i.i.d. from the law, independent of positions.
ParticleSystem sample_system(const SpeedLaw& law, Domain domain, std::size_t n, Seed seed);

/// Speeds become a*v + b; positions unchanged. The collision matching is
/// invariant for a > 0.
ParticleSystem apply_affine(const ParticleSystem& sys, double a, double b);

/// Space reflection x -> -x (positions and speeds negated, order reversed).
/// Half-line systems are translated back so all positions stay positive and
/// the domain representation is preserved.
ParticleSystem reflect(const ParticleSystem& sys);

/// Bullet-problem change of variables: bullets fired from the origin at the
/// given release times with speeds w become half-line particles at
/// positions = release times with speeds 1/(alpha + beta*w).
ParticleSystem bullet_to_ballistic(const std::vector<double>& release_times,
                                   const std::vector<double>& bullet_speeds, double alpha,
                                   double beta);

}  // namespace ballistic

#endif
