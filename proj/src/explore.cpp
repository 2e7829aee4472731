// SPDX-License-Identifier: Apache-2.0
#include "ballistic/explore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "ballistic/errors.hpp"

namespace ballistic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invariant_failure(const std::string& what) {
  throw_error(ErrorCode::internal, "exploration invariant violated: " + what);
}

// Fates of the current prefix [0, M). Kept exactly equal to what
// resolve_fast would produce on the prefix: the walk only ever appends at
// the right, where the three §-case updates below are exact.
struct PrefixState {
  std::vector<double> death;
  std::vector<std::int32_t> partner;

  void adopt(const Outcome& o) {
    const std::size_t m = o.size();
    for (std::size_t i = 0; i < m; ++i) {
      death[i] = o.death_time(i);
      partner[i] = o.partner(i);
    }
  }
};

}  // namespace

ExplorationTrace explore(const ParticleSystem& sys, std::size_t max_steps) {
  if (sys.domain() != Domain::half_line) {
    throw_error(ErrorCode::invalid_argument, "explore requires a half-line system");
  }
  const std::vector<double>& pos = sys.positions();
  const std::vector<double>& vel = sys.speeds();
  const std::size_t n = sys.size();
  for (double v : vel) {
    if (v != -1.0 && v != 0.0 && v != 1.0) {
      throw_error(ErrorCode::invalid_argument, "explore requires speeds in {-1, 0, +1}");
    }
  }

  ExplorationTrace trace;
  trace.locations.push_back(0);
  PrefixState st;
  st.death.assign(n, kInf);
  st.partner.assign(n, -1);

  std::size_t k_cur = 0;  // current walk location K_n; prefix [0, k_cur) is resolved in st
  std::int64_t running = 0;

  auto emit = [&](std::int8_t e, std::int8_t et, std::size_t k_next) {
    trace.eps.push_back(e);
    trace.eps_tilde.push_back(et);
    running += e;
    trace.partial_sums.push_back(running);
    trace.locations.push_back(static_cast<std::uint32_t>(k_next));
    k_cur = k_next;
  };

  while (k_cur < n && trace.steps() < max_steps) {
    const double v = vel[k_cur];
    if (v == 0.0) {
      // A standing particle at the right edge of a walk prefix survives it:
      // no +1 survives the prefix, and doomed +1s die strictly to its left.
      emit(+1, +1, k_cur + 1);
      continue;
    }
    if (v == 1.0) {
      // Least k > K with K annihilating against k in the block [K, k].
      bool found = false;
      for (std::size_t k = k_cur + 1; k < n; ++k) {
        if (vel[k] == 1.0) continue;  // a +1 never annihilates another +1
        const std::size_t len = k - k_cur + 1;
        Outcome block = resolve_fast(std::span(pos).subspan(k_cur, len),
                                     std::span(vel).subspan(k_cur, len));
        if (block.partner(0) == static_cast<std::int32_t>(k - k_cur)) {
          // The block resolves in isolation: nothing from the prefix enters
          // its territory, so its matching is the prefix extension verbatim.
          for (std::size_t i = 0; i < len; ++i) {
            st.death[k_cur + i] = block.death_time(i);
            const std::int32_t bp = block.partner(i);
            st.partner[k_cur + i] = bp < 0 ? -1 : static_cast<std::int32_t>(bp + k_cur);
          }
          emit(0, 0, k + 1);
          found = true;
          break;
        }
      }
      if (!found) {
        trace.end = TraceEnd::search_exhausted;
        return trace;
      }
      continue;
    }

    // v == -1: first crossing of the left-moving trajectory against the
    // prefix space-time diagram. Only standing or right-moving particles can
    // be hit, and only while still alive.
    double best_t = kInf;
    std::size_t best_i = n;
    const double xk = pos[k_cur];
    for (std::size_t i = 0; i < k_cur; ++i) {
      const double vi = vel[i];
      if (vi < 0.0) continue;
      // closing speeds are exactly 1 (standing) or 2 (oncoming); these
      // expressions are bit-identical to the engine's event times
      const double t = vi == 0.0 ? xk - pos[i] : (xk - pos[i]) * 0.5;
      if (t < st.death[i] && t < best_t) {
        best_t = t;
        best_i = i;
      }
    }
    if (best_i == n) {
      // Survives the prefix (reaches 0 in the restricted system).
      emit(-1, -1, k_cur + 1);
      continue;
    }
    if (vel[best_i] != 0.0) invariant_failure("a -1 particle was first met by a non-zero speed");
    if (st.death[best_i] == kInf) {
      // Kills a prefix survivor.
      st.death[best_i] = best_t;
      st.death[k_cur] = best_t;
      st.partner[best_i] = static_cast<std::int32_t>(k_cur);
      st.partner[k_cur] = static_cast<std::int32_t>(best_i);
      emit(-1, -1, k_cur + 1);
      continue;
    }

    // The victim was already doomed: its killer, a +1, is freed and must in
    // turn die against some later k. Least k > K with j annihilating against
    // k in [0, k], by re-resolving full prefixes from scratch.
    const std::int32_t j = st.partner[best_i];
    if (j < 0 || vel[j] != 1.0) invariant_failure("freed partner is not a +1");
    bool found = false;
    for (std::size_t k = k_cur + 1; k < n; ++k) {
      if (vel[k] == 1.0) continue;
      Outcome o = resolve_fast(std::span(pos).first(k + 1), std::span(vel).first(k + 1));
      if (o.partner(j) == static_cast<std::int32_t>(k)) {
        st.adopt(o);
        for (std::size_t i = 0; i <= k; ++i) {
          if (o.partner(i) < 0 && vel[i] == 1.0) invariant_failure("+1 survives a walk prefix");
        }
        emit(0, -1, k + 1);
        found = true;
        break;
      }
    }
    if (!found) {
      trace.end = TraceEnd::search_exhausted;
      return trace;
    }
  }

  trace.end = k_cur >= n ? TraceEnd::consumed : TraceEnd::max_steps;
  return trace;
}

std::int64_t survivor_balance(const ParticleSystem& sys, const Outcome& prefix_outcome,
                              std::size_t upto) {
  if (upto > sys.size() || upto > prefix_outcome.size()) {
    throw_error(ErrorCode::invalid_argument, "survivor_balance: upto out of range");
  }
  std::int64_t balance = 0;
  for (std::size_t i = 0; i < upto; ++i) {
    if (!prefix_outcome.alive(i)) continue;
    if (sys.speeds()[i] == 0.0) ++balance;
    else if (sys.speeds()[i] == -1.0) --balance;
  }
  return balance;
}

double drift_single(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw_error(ErrorCode::invalid_argument, "drift_single: p outside [0, 1]");
  return (3.0 * p - 1.0) / 2.0;
}

BlockDriftTable build_block_table() {
  BlockDriftTable table;
  const std::int8_t speeds[3] = {-1, 0, +1};
  // eps_tilde weight of a leftover particle, by speed.
  auto weight = [](std::int8_t v) -> std::int64_t { return v == 0 ? +1 : (v == -1 ? -1 : 0); };

  std::size_t idx = 0;
  for (std::int8_t a : speeds) {
    for (std::int8_t b : speeds) {
      for (std::int8_t c : speeds) {
        const bool left_pair = a > b;
        const bool right_pair = b > c;
        Rational inc;
        if (left_pair && right_pair) {
          // (+1, 0, -1): whichever pair meets first depends on the
          // interdistances, with equal probability; the leftover is the
          // opposite extreme.
          inc = Rational(weight(c) + weight(a), 2);
        } else if (left_pair) {
          inc = Rational(weight(c));
        } else if (right_pair) {
          inc = Rational(weight(a));
        } else {
          inc = Rational(weight(a) + weight(b) + weight(c));
        }
        table.entries[idx++] = BlockDriftTable::Entry{{a, b, c}, inc};
      }
    }
  }
  return table;
}

double drift_block(double p, const BlockDriftTable& table) {
  if (!(p >= 0.0 && p <= 1.0)) throw_error(ErrorCode::invalid_argument, "drift_block: p outside [0, 1]");
  const double q = (1.0 - p) / 2.0;
  double sum = 0.0;
  for (const auto& e : table.entries) {
    double prob = 1.0;
    for (std::int8_t v : e.triple) prob *= (v == 0 ? p : q);
    sum += prob * e.increment.to_double();
  }
  return sum;
}

double drift_block(double p) {
  static const BlockDriftTable table = build_block_table();
  return drift_block(p, table);
}

double critical_root(const std::function<double(double)>& drift, double lo, double hi) {
  double flo = drift(lo);
  double fhi = drift(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw_error(ErrorCode::no_bracket, "critical_root: drift does not change sign on the bracket");
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const double fm = drift(mid);
    if (fm < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double walk_survival_bound(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw_error(ErrorCode::invalid_argument, "walk_survival_bound: p outside [0, 1]");
  }
  return std::max(0.0, 2.0 * p - 1.0);
}

}  // namespace ballistic
