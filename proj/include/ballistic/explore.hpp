// SPDX-License-Identifier: Apache-2.0
#ifndef BALLISTIC_EXPLORE_HPP
#define BALLISTIC_EXPLORE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ballistic/engine.hpp"
#include "ballistic/model.hpp"
#include "ballistic/rational.hpp"

namespace ballistic {

enum class TraceEnd {
  consumed,          // the walk reached the end of the finite sample
  max_steps,         // stopped by the step cap
  search_exhausted,  // a least-k search ran out of particles (a +1 survived the sample)
};

/// Left-to-right exploration walk over a half-line three-speed system:
/// stopping locations K_0 = 0 < K_1 < ... with per-step signs eps and their
/// pessimistic i.i.d. minorant eps_tilde. For complete traces the final
/// location equals the particle count.
struct ExplorationTrace {
  std::vector<std::uint32_t> locations;  // length = steps + 1
  std::vector<std::int8_t> eps;          // one per step, in {-1, 0, +1}
  std::vector<std::int8_t> eps_tilde;    // eps[n] >= eps_tilde[n] always
  std::vector<std::int64_t> partial_sums;  // prefix sums of eps
  TraceEnd end = TraceEnd::consumed;

  bool incomplete() const noexcept { return end != TraceEnd::consumed; }
  std::size_t steps() const noexcept { return eps.size(); }
};

/// Runs the walk. Requires a half-line system whose speeds all lie in
/// {-1, 0, +1}. The least-k searches re-resolve restrictions from scratch
/// with resolve_fast; an exhausted search truncates the trace and flags it
/// incomplete rather than raising.
ExplorationTrace explore(const ParticleSystem& sys, std::size_t max_steps);

/// (# survivors with speed 0) - (# survivors with speed -1) among indices
/// [0, upto) of the given prefix outcome. The outcome must be the resolution
/// of the system restricted to [0, upto).
std::int64_t survivor_balance(const ParticleSystem& sys, const Outcome& prefix_outcome,
                              std::size_t upto);

/// E[eps_tilde] for the single-step walk: (3p - 1)/2.
double drift_single(double p);

/// Expected per-block sign increment for each of the 27 speed triples in the
/// 3-by-3 block refinement. Increments are exact rationals; the only mixed
/// entry is (+1, 0, -1) at -1/2.
struct BlockDriftTable {
  struct Entry {
    std::array<std::int8_t, 3> triple;
    Rational increment;
  };
  std::array<Entry, 27> entries;
};

BlockDriftTable build_block_table();

/// Expected block increment under atom probabilities ((1-p)/2, p, (1-p)/2).
double drift_block(double p, const BlockDriftTable& table);
double drift_block(double p);

/// Bisection root of a sign-changing drift on [lo, hi] to 1e-9 absolute.
/// Throws ErrorCode::no_bracket unless drift(lo) < 0 < drift(hi).
double critical_root(const std::function<double(double)>& drift, double lo, double hi);

/// Probability that the +/-1 random walk with up-probability p stays
/// strictly positive forever: max(0, 2p - 1). Its square lower-bounds
/// full-line survival of a 0-speed particle when the law puts mass > 1/2
/// at 0.
double walk_survival_bound(double p);

}  // namespace ballistic

#endif
