// SPDX-License-Identifier: Apache-2.0
#include "ballistic/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "ballistic/errors.hpp"

namespace ballistic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Event {
  double time;
  std::uint32_t left;
  std::uint32_t right;
};

// Speed gaps of discrete +-1/0 laws are exactly 1 or 2; multiplying by the
// exact reciprocal is bit-identical to the division and much cheaper.
inline double collision_time(double gap, double dv) {
  if (dv == 1.0) return gap;
  if (dv == 2.0) return gap * 0.5;
  return gap / dv;
}

// 4-ary implicit min-heap on time. Shallower than a binary heap, which
// matters in the resolver's pop-dominated loop.
class EventHeap {
 public:
  void clear() { data_.clear(); }
  bool empty() const { return data_.empty(); }
  const Event& top() const { return data_.front(); }

  void push(Event e) {
    data_.push_back(e);
    std::size_t i = data_.size() - 1;
    while (i > 0) {
      std::size_t parent = (i - 1) >> 2;
      if (data_[parent].time <= e.time) break;
      data_[i] = data_[parent];
      i = parent;
    }
    data_[i] = e;
  }

  Event pop() {
    Event out = data_.front();
    Event last = data_.back();
    data_.pop_back();
    if (!data_.empty()) sift_down(0, last);
    return out;
  }

  /// Appends without restoring heap order; call heapify() once afterwards.
  void push_raw(Event e) { data_.push_back(e); }

  void heapify() {
    if (data_.size() < 2) return;
    for (std::size_t i = (data_.size() - 2) >> 2; i + 1 > 0; --i) sift_down(i, data_[i]);
  }

 private:
  void sift_down(std::size_t i, Event e) {
    const std::size_t n = data_.size();
    for (;;) {
      std::size_t child = (i << 2) + 1;
      if (child >= n) break;
      std::size_t best = child;
      double best_t = data_[child].time;
      const std::size_t end = std::min(child + 4, n);
      for (std::size_t c = child + 1; c < end; ++c) {
        if (data_[c].time < best_t) {
          best_t = data_[c].time;
          best = c;
        }
      }
      if (best_t >= e.time) break;
      data_[i] = data_[best];
      i = best;
    }
    data_[i] = e;
  }

  std::vector<Event> data_;
};

struct EngineBuffers {
  std::vector<std::int32_t> prev, next;
  std::vector<std::uint8_t> alive;
  EventHeap heap;
  std::vector<Event> stash;
};

EngineBuffers& buffers() {
  thread_local EngineBuffers b;
  return b;
}

[[noreturn]] void throw_exact_tie(double t) {
  throw_error(ErrorCode::exact_tie,
              "exact collision-time tie between distinct candidate pairs at t = " + std::to_string(t));
}

// Core event loop. Sink is called once per collision, in chronological
// order, with (left, right, time). Returns the alive flags by reference to
// the thread-local buffer (valid until the next engine call on this thread).
template <class Sink>
const std::vector<std::uint8_t>& run_collisions(std::span<const double> pos,
                                                std::span<const double> vel, Sink&& sink) {
  const std::size_t n = pos.size();
  EngineBuffers& b = buffers();
  b.prev.resize(n);
  b.next.resize(n);
  b.alive.assign(n, 1);
  b.heap.clear();

  for (std::size_t i = 0; i < n; ++i) {
    b.prev[i] = static_cast<std::int32_t>(i) - 1;
    b.next[i] = static_cast<std::int32_t>(i) + 1;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (vel[i] > vel[i + 1]) {
      const double t = collision_time(pos[i + 1] - pos[i], vel[i] - vel[i + 1]);
      b.heap.push_raw(Event{t, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1)});
    }
  }
  b.heap.heapify();

  while (!b.heap.empty()) {
    const Event e = b.heap.pop();
    if (!(b.alive[e.left] & b.alive[e.right])) continue;
    // A still-valid event at the exact same time sharing a particle with e
    // is a genuine multiple collision: the resolution order would change the
    // outcome. Equal-time events on disjoint pairs commute and proceed.
    if (!b.heap.empty() && b.heap.top().time == e.time) {
      b.stash.clear();
      while (!b.heap.empty() && b.heap.top().time == e.time) {
        const Event f = b.heap.pop();
        if (!(b.alive[f.left] & b.alive[f.right])) continue;
        if (f.left == e.left || f.left == e.right || f.right == e.left || f.right == e.right) {
          throw_exact_tie(e.time);
        }
        b.stash.push_back(f);
      }
      for (const Event& f : b.stash) b.heap.push(f);
    }
    b.alive[e.left] = 0;
    b.alive[e.right] = 0;
    sink(e.left, e.right, e.time);
    const std::int32_t a = b.prev[e.left];
    const std::int32_t c = b.next[e.right];
    if (a >= 0) b.next[a] = c;
    if (c < static_cast<std::int32_t>(n)) b.prev[c] = a;
    if (a >= 0 && c < static_cast<std::int32_t>(n) && vel[a] > vel[c]) {
      const double t = collision_time(pos[c] - pos[a], vel[a] - vel[c]);
      b.heap.push(Event{t, static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c)});
    }
  }
  return b.alive;
}

// Collision position from the left trajectory; the right trajectory only
// backs the 1e-9 relative consistency requirement.
double collision_position(std::span<const double> pos, std::span<const double> vel,
                          std::uint32_t i, std::uint32_t j, double t) {
  const double xi = std::fma(vel[i], t, pos[i]);
  const double xj = std::fma(vel[j], t, pos[j]);
  const double tol = 1e-9 * std::max(1.0, std::abs(xi));
  if (!(std::abs(xi - xj) <= tol)) {
    throw_error(ErrorCode::internal, "collision position inconsistent between trajectories");
  }
  return xi;
}

Outcome build_outcome(std::span<const double> pos, std::span<const double> vel, bool fast) {
  const std::size_t n = pos.size();
  std::vector<double> death(n, kInf);
  std::vector<std::int32_t> partner(n, -1);
  std::vector<double> death_pos(n, 0.0);
  std::vector<Collision> collisions;

  auto sink = [&](std::uint32_t i, std::uint32_t j, double t) {
    const double x = collision_position(pos, vel, i, j, t);
    death[i] = death[j] = t;
    partner[i] = static_cast<std::int32_t>(j);
    partner[j] = static_cast<std::int32_t>(i);
    death_pos[i] = death_pos[j] = x;
    collisions.push_back(Collision{i, j, t, x});
  };

  if (fast) {
    run_collisions(pos, vel, sink);
    return Outcome(std::move(death), std::move(partner), std::move(death_pos),
                   std::move(collisions));
  }

  // Oracle: chronological scan over alive adjacent approaching pairs.
  std::vector<std::int32_t> prev(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = static_cast<std::int32_t>(i) - 1;
    next[i] = static_cast<std::int32_t>(i) + 1;
  }
  std::int32_t head = n > 0 ? 0 : -1;
  std::vector<std::int32_t> achievers;  // left indices attaining the round minimum
  for (;;) {
    double best_t = kInf;
    achievers.clear();
    for (std::int32_t i = head; i >= 0 && next[i] < static_cast<std::int32_t>(n); i = next[i]) {
      const std::int32_t j = next[i];
      if (vel[i] > vel[j]) {
        const double t = collision_time(pos[j] - pos[i], vel[i] - vel[j]);
        if (t < best_t) {
          best_t = t;
          achievers.clear();
          achievers.push_back(i);
        } else if (t == best_t) {
          achievers.push_back(i);
        }
      }
    }
    if (achievers.empty()) break;
    // Two minimum-achieving pairs sharing a particle are consecutive alive
    // neighbors; that is a genuine multiple collision. Disjoint simultaneous
    // pairs commute, execute the leftmost first.
    for (std::size_t a = 0; a + 1 < achievers.size(); ++a) {
      if (next[achievers[a]] == achievers[a + 1]) throw_exact_tie(best_t);
    }
    const std::int32_t i = achievers.front();
    const std::int32_t j = next[i];
    sink(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), best_t);
    const std::int32_t a = prev[i];
    const std::int32_t c = next[j];
    if (a >= 0) next[a] = c; else head = c < static_cast<std::int32_t>(n) ? c : -1;
    if (c < static_cast<std::int32_t>(n)) prev[c] = a;
  }
  return Outcome(std::move(death), std::move(partner), std::move(death_pos), std::move(collisions));
}

}  // namespace

Outcome resolve_oracle(std::span<const double> positions, std::span<const double> speeds) {
  return build_outcome(positions, speeds, /*fast=*/false);
}

Outcome resolve_oracle(const ParticleSystem& sys) {
  return resolve_oracle(sys.positions(), sys.speeds());
}

Outcome resolve_fast(std::span<const double> positions, std::span<const double> speeds) {
  return build_outcome(positions, speeds, /*fast=*/true);
}

Outcome resolve_fast(const ParticleSystem& sys) {
  return resolve_fast(sys.positions(), sys.speeds());
}

SurvivorCounts resolve_survivor_counts(std::span<const double> positions,
                                       std::span<const double> speeds) {
  const auto& alive = run_collisions(positions, speeds, [](std::uint32_t, std::uint32_t, double) {});
  SurvivorCounts out;
  for (std::size_t i = 0; i < alive.size(); ++i) {
    if (!alive[i]) continue;
    ++out.alive;
    if (speeds[i] == 0.0) ++out.zeros;
    else if (speeds[i] == -1.0) ++out.minus_ones;
  }
  return out;
}

std::size_t pairs_over(const Outcome& outcome, const ParticleSystem& sys, double x) {
  const auto& pos = sys.positions();
  auto it = std::lower_bound(pos.begin(), pos.end(), x);
  if (it != pos.end() && *it == x) {
    throw_error(ErrorCode::start_coincidence, "query point coincides with a particle start");
  }
  std::size_t count = 0;
  for (const Collision& c : outcome.collisions()) {
    if (pos[c.left] < x && x < pos[c.right]) ++count;
  }
  return count;
}

std::size_t crossings_of_zero(const ParticleSystem& sys, const Outcome& outcome, double horizon) {
  if (sys.domain() != Domain::half_line) {
    throw_error(ErrorCode::invalid_argument, "crossings_of_zero requires a half-line system");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const double v = sys.speeds()[i];
    if (v >= 0.0) continue;
    const double t_cross = sys.positions()[i] / -v;
    if (t_cross < outcome.death_time(i) && t_cross < horizon) ++count;
  }
  return count;
}

std::vector<AliveParticle> alive_at(const ParticleSystem& sys, const Outcome& outcome, double t) {
  if (!(t >= 0.0)) throw_error(ErrorCode::invalid_argument, "alive_at: t must be >= 0");
  std::vector<AliveParticle> out;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    if (outcome.death_time(i) > t) {
      out.push_back(AliveParticle{std::fma(sys.speeds()[i], t, sys.positions()[i]), sys.speeds()[i]});
    }
  }
  return out;
}

void validate_outcome(const ParticleSystem& sys, const Outcome& outcome) {
  const std::size_t n = sys.size();
  auto fail = [](const std::string& what) { throw_error(ErrorCode::internal, "outcome invariant violated: " + what); };
  if (outcome.size() != n) fail("size mismatch");

  // Stack of currently open pairs; laminar structure means a closing index
  // always matches the top.
  std::vector<std::uint32_t> open;
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::int32_t p = outcome.partner(k);
    if (p < 0) {
      if (!open.empty()) fail("alive particle inside a matched pair");
      if (outcome.death_time(k) != kInf) fail("alive particle with finite death time");
      continue;
    }
    if (static_cast<std::size_t>(p) >= n) fail("partner out of range");
    if (outcome.partner(p) != static_cast<std::int32_t>(k)) fail("matching is not an involution");
    if (static_cast<std::uint32_t>(p) > k) {
      if (!(sys.speeds()[k] > sys.speeds()[p])) fail("left member of a pair not faster");
      open.push_back(k);
    } else {
      if (open.empty() || open.back() != static_cast<std::uint32_t>(p)) fail("interleaved pairs");
      open.pop_back();
      if (!open.empty()) {
        // Strictly nested pair must collide strictly earlier.
        const std::uint32_t outer = open.back();
        if (!(outcome.death_time(k) < outcome.death_time(outer))) {
          fail("nested pair does not collide strictly earlier");
        }
      }
      const double t = outcome.death_time(k);
      if (!(t > 0.0) || !std::isfinite(t)) fail("collision time not positive finite");
      if (outcome.death_time(p) != t) fail("pair death times differ");
      const double xi = std::fma(sys.speeds()[p], t, sys.positions()[p]);
      const double xj = std::fma(sys.speeds()[k], t, sys.positions()[k]);
      if (!(std::abs(xi - xj) <= 1e-9 * std::max(1.0, std::abs(xi)))) {
        fail("trajectories inconsistent at collision");
      }
    }
  }
  if (!open.empty()) fail("unclosed pair");

  double last_t = 0.0;
  std::size_t matched = 0;
  for (const Collision& c : outcome.collisions()) {
    if (c.time < last_t) fail("collision list not chronological");
    last_t = c.time;
    if (outcome.partner(c.left) != static_cast<std::int32_t>(c.right)) fail("collision list disagrees with matching");
    matched += 2;
  }
  std::size_t dead = 0;
  for (std::size_t i = 0; i < n; ++i) dead += outcome.partner(i) >= 0 ? 1 : 0;
  if (dead != matched) fail("collision list incomplete");
}

}  // namespace ballistic
