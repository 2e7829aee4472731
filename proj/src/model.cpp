// SPDX-License-Identifier: Apache-2.0
#include "ballistic/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ballistic/errors.hpp"

namespace ballistic {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw_error(ErrorCode::invalid_argument, what);
}

}  // namespace

SpeedLaw SpeedLaw::discrete(std::vector<Atom> atoms) {
  // Elide zero-weight atoms before validating.
  std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
  require(!atoms.empty(), "discrete law needs at least one atom with positive weight");
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    require(std::isfinite(atoms[i].speed), "atom speed must be finite");
    require(atoms[i].weight > 0.0 && atoms[i].weight <= 1.0, "atom weight must lie in (0, 1]");
    if (i > 0) require(atoms[i - 1].speed < atoms[i].speed, "atom speeds must be strictly increasing");
    sum += atoms[i].weight;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "atom weights must sum to 1 within 1e-12");

  SpeedLaw law;
  law.kind_ = Kind::discrete;
  law.atoms_ = std::move(atoms);
  double cum = 0.0;
  for (const Atom& a : law.atoms_) {
    cum += a.weight;
    law.cdf_.push_back(cum);
    law.v_max_ = std::max(law.v_max_, std::abs(a.speed));
  }
  law.cdf_.back() = 1.0;
  return law;
}

SpeedLaw SpeedLaw::uniform_interval(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform interval needs lo < hi");
  SpeedLaw law;
  law.kind_ = Kind::uniform_interval;
  law.lo_ = lo;
  law.hi_ = hi;
  law.v_max_ = std::max(std::abs(lo), std::abs(hi));
  return law;
}

double SpeedLaw::sample(Rng& rng) const {
  if (kind_ == Kind::uniform_interval) {
    return lo_ + rng.next_unit_co() * (hi_ - lo_);
  }
  double u = rng.next_unit_co();
  for (std::size_t i = 0; i + 1 < cdf_.size(); ++i) {
    if (u < cdf_[i]) return atoms_[i].speed;
  }
  return atoms_.back().speed;
}

bool SpeedLaw::is_three_speed_support() const noexcept {
  if (kind_ != Kind::discrete) return false;
  for (const Atom& a : atoms_) {
    if (a.speed != -1.0 && a.speed != 0.0 && a.speed != 1.0) return false;
  }
  return true;
}

SpeedLaw three_speed(double p) {
  require(p >= 0.0 && p <= 1.0, "three_speed: p must lie in [0, 1]");
  const double q = (1.0 - p) / 2.0;
  SpeedLaw law = SpeedLaw::discrete({{-1.0, q}, {0.0, p}, {1.0, q}});
  // v_max stays 1 even when p = 1 collapses the law to a single 0 atom.
  law.v_max_ = 1.0;
  return law;
}

ParticleSystem::ParticleSystem(std::vector<double> positions, std::vector<double> speeds,
                               Domain domain, std::size_t origin_index)
    : positions_(std::move(positions)), speeds_(std::move(speeds)), domain_(domain),
      origin_index_(origin_index) {
  require(positions_.size() == speeds_.size(), "positions and speeds must have equal length");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    require(std::isfinite(positions_[i]) && std::isfinite(speeds_[i]),
            "positions and speeds must be finite");
    if (i > 0) require(positions_[i - 1] < positions_[i], "positions must be strictly increasing");
  }
  if (domain_ == Domain::full_line_palm) {
    require(origin_index_ < positions_.size(), "origin index out of range");
    require(positions_[origin_index_] == 0.0, "full-line Palm systems need a particle at exactly 0");
  } else {
    require(positions_.empty() || positions_.front() > 0.0,
            "half-line systems need all positions in (0, inf)");
    origin_index_ = 0;
  }
}

void ParticleSystem::set_speed(std::size_t i, double v) {
  require(i < speeds_.size(), "set_speed: index out of range");
  require(std::isfinite(v), "set_speed: speed must be finite");
  speeds_[i] = v;
}

ParticleSystem sample_system(const SpeedLaw& law, Domain domain, std::size_t n, Seed seed) {
  require(n >= 1, "sample_system: n must be >= 1");
  Rng right(seed, stream::gaps_right);
  Rng spd(seed, stream::speeds);

  std::vector<double> positions;
  if (domain == Domain::half_line) {
    positions.reserve(n);
    double x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x += right.exponential();
      positions.push_back(x);
    }
    std::vector<double> speeds(n);
    for (double& v : speeds) v = law.sample(spd);
    return ParticleSystem(std::move(positions), std::move(speeds), domain);
  }

  Rng left(seed, stream::gaps_left);
  positions.resize(2 * n + 1);
  positions[n] = 0.0;
  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x += right.exponential();
    positions[n + 1 + i] = x;
  }
  x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x += left.exponential();
    positions[n - 1 - i] = -x;
  }
  std::vector<double> speeds(2 * n + 1);
  for (double& v : speeds) v = law.sample(spd);
  return ParticleSystem(std::move(positions), std::move(speeds), domain, n);
}

ParticleSystem apply_affine(const ParticleSystem& sys, double a, double b) {
  require(a != 0.0, "apply_affine: a must be nonzero");
  require(std::isfinite(a) && std::isfinite(b), "apply_affine: coefficients must be finite");
  std::vector<double> speeds = sys.speeds();
  for (double& v : speeds) v = a * v + b;
  return ParticleSystem(sys.positions(), std::move(speeds), sys.domain(), sys.origin_index());
}

ParticleSystem reflect(const ParticleSystem& sys) {
  const std::size_t n = sys.size();
  std::vector<double> positions(n), speeds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    double x = sys.positions()[j];
    positions[i] = (x == 0.0) ? 0.0 : -x;
    double v = sys.speeds()[j];
    speeds[i] = (v == 0.0) ? 0.0 : -v;
  }
  if (sys.domain() == Domain::full_line_palm) {
    return ParticleSystem(std::move(positions), std::move(speeds), sys.domain(),
                          n - 1 - sys.origin_index());
  }
  // Translate the mirrored half-line configuration back into (0, inf),
  // preserving the span [x_first, x_last] so reflection stays an involution.
  if (n > 0) {
    const double shift = sys.positions().front() + sys.positions().back();
    for (double& x : positions) x += shift;
  }
  return ParticleSystem(std::move(positions), std::move(speeds), Domain::half_line);
}

ParticleSystem bullet_to_ballistic(const std::vector<double>& release_times,
                                   const std::vector<double>& bullet_speeds, double alpha,
                                   double beta) {
  require(release_times.size() == bullet_speeds.size(),
          "bullet_to_ballistic: times and speeds must have equal length");
  for (std::size_t i = 1; i < release_times.size(); ++i) {
    require(release_times[i - 1] < release_times[i],
            "bullet_to_ballistic: release times must be strictly increasing");
  }
  std::vector<double> speeds(bullet_speeds.size());
  for (std::size_t i = 0; i < bullet_speeds.size(); ++i) {
    const double denom = alpha + beta * bullet_speeds[i];
    if (!(denom > 0.0)) {
      throw_error(ErrorCode::invalid_argument,
                  "bullet_to_ballistic: alpha + beta*w must be positive for every bullet");
    }
    speeds[i] = 1.0 / denom;
  }
  std::vector<double> positions = release_times;
  if (!positions.empty() && positions.front() <= 0.0) {
    const double shift = 1.0 - positions.front();
    for (double& x : positions) x += shift;
  }
  return ParticleSystem(std::move(positions), std::move(speeds), Domain::half_line);
}

}  // namespace ballistic
