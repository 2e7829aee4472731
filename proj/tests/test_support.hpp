// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_TEST_SUPPORT_HPP
#define BALLISTIC_TEST_SUPPORT_HPP

#include <vector>

#include "ballistic/engine.hpp"
#include "ballistic/model.hpp"
#include "ballistic/rng.hpp"

namespace test_support {

using namespace ballistic;

inline ParticleSystem half_line(std::vector<double> positions, std::vector<double> speeds) {
  return ParticleSystem(std::move(positions), std::move(speeds), Domain::half_line);
}

inline ParticleSystem full_line(std::vector<double> positions, std::vector<double> speeds,
                                std::size_t origin_index) {
  return ParticleSystem(std::move(positions), std::move(speeds), Domain::full_line_palm,
                        origin_index);
}

/// The mixed law pool used by the differential tests: the three-speed family
/// plus one continuous law.
inline std::vector<SpeedLaw> mixed_laws() {
  std::vector<SpeedLaw> laws;
  for (int i = 1; i <= 9; ++i) laws.push_back(three_speed(i / 10.0));
  laws.push_back(SpeedLaw::uniform_interval(-1.0, 1.0));
  return laws;
}

inline bool same_matching(const Outcome& a, const Outcome& b, double time_rel_tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.partner(i) != b.partner(i)) return false;
    if (!a.alive(i)) {
      const double ta = a.death_time(i), tb = b.death_time(i);
      if (std::abs(ta - tb) > time_rel_tol * std::max(1.0, std::abs(tb))) return false;
    }
  }
  return true;
}

}  // namespace test_support

#endif
