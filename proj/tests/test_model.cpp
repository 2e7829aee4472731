// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "ballistic/errors.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ballistic;
using test_support::half_line;
using test_support::same_matching;

TEST_CASE("three_speed atoms and degenerate ends") {
  SUBCASE("p = 0.25") {
    const SpeedLaw law = three_speed(0.25);
    REQUIRE(law.atoms().size() == 3);
    CHECK(law.atoms()[0].speed == -1.0);
    CHECK(law.atoms()[0].weight == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(law.atoms()[1].weight == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(law.atoms()[2].weight == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(law.v_max() == 1.0);
  }
  SUBCASE("p = 0 elides the zero-weight atom") {
    const SpeedLaw law = three_speed(0.0);
    REQUIRE(law.atoms().size() == 2);
    CHECK(law.atoms()[0].speed == -1.0);
    CHECK(law.atoms()[1].speed == 1.0);
    CHECK(law.atoms()[0].weight == 0.5);
  }
  SUBCASE("p = 1 keeps v_max = 1 for uniform windowing") {
    const SpeedLaw law = three_speed(1.0);
    REQUIRE(law.atoms().size() == 1);
    CHECK(law.atoms()[0].speed == 0.0);
    CHECK(law.v_max() == 1.0);
  }
  SUBCASE("p outside [0,1] is a domain error") {
    CHECK_THROWS_AS(three_speed(-0.1), Error);
    CHECK_THROWS_AS(three_speed(1.1), Error);
  }
}

TEST_CASE("discrete law validation") {
  CHECK_THROWS_AS(SpeedLaw::discrete({{0.0, 0.5}, {0.0, 0.5}}), Error);   // not increasing
  CHECK_THROWS_AS(SpeedLaw::discrete({{-1.0, 0.4}, {1.0, 0.4}}), Error);  // weights != 1
  const SpeedLaw law = SpeedLaw::discrete({{-2.0, 0.25}, {0.5, 0.75}});
  CHECK(law.v_max() == 2.0);
  CHECK_FALSE(law.is_three_speed_support());
  CHECK(three_speed(0.5).is_three_speed_support());
}

TEST_CASE("sample_system shapes and determinism") {
  const SpeedLaw law = three_speed(0.3);
  SUBCASE("full-line Palm n=1 puts the middle particle at 0") {
    const ParticleSystem sys = sample_system(law, Domain::full_line_palm, 1, Seed{5, 5});
    REQUIRE(sys.size() == 3);
    CHECK(sys.positions()[1] == 0.0);
    CHECK(sys.origin_index() == 1);
    CHECK(sys.positions()[0] < 0.0);
    CHECK(sys.positions()[2] > 0.0);
  }
  SUBCASE("same seed twice gives identical systems") {
    const ParticleSystem a = sample_system(law, Domain::half_line, 500, Seed{9, 1});
    const ParticleSystem b = sample_system(law, Domain::half_line, 500, Seed{9, 1});
    CHECK(a.positions() == b.positions());
    CHECK(a.speeds() == b.speeds());
  }
  SUBCASE("positions strictly increasing") {
    const ParticleSystem sys = sample_system(law, Domain::full_line_palm, 3000, Seed{11, 0});
    for (std::size_t i = 1; i < sys.size(); ++i) {
      CHECK(sys.positions()[i - 1] < sys.positions()[i]);
    }
  }
  SUBCASE("mean gap near 1") {
    const ParticleSystem sys = sample_system(law, Domain::half_line, 1000000, Seed{13, 0});
    CHECK(std::abs(sys.positions().back() / 1e6 - 1.0) < 0.01);
  }
}

TEST_CASE("apply_affine") {
  const ParticleSystem sys = half_line({1.0, 2.0}, {1.0, -1.0});
  SUBCASE("identity") {
    const ParticleSystem out = apply_affine(sys, 1.0, 0.0);
    CHECK(out.speeds() == sys.speeds());
    CHECK(out.positions() == sys.positions());
  }
  SUBCASE("a=2 b=3") {
    const ParticleSystem out = apply_affine(sys, 2.0, 3.0);
    CHECK(out.speeds()[0] == 5.0);
    CHECK(out.speeds()[1] == 1.0);
  }
  SUBCASE("a=0 rejected") { CHECK_THROWS_AS(apply_affine(sys, 0.0, 1.0), Error); }
  SUBCASE("inverse returns speeds within 1e-12") {
    const SpeedLaw law = SpeedLaw::uniform_interval(-1.0, 1.0);
    const ParticleSystem rnd = sample_system(law, Domain::half_line, 200, Seed{3, 3});
    const ParticleSystem back = apply_affine(apply_affine(rnd, 1.7, -0.4), 1.0 / 1.7, 0.4 / 1.7);
    for (std::size_t i = 0; i < rnd.size(); ++i) {
      CHECK(back.speeds()[i] == doctest::Approx(rnd.speeds()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("three-speed affine shift keeps matching") {
  const SpeedLaw law = three_speed(0.4);
  const ParticleSystem sys = sample_system(law, Domain::half_line, 300, Seed{21, 4});
  const ParticleSystem shifted = apply_affine(sys, 1.0, 1.0);
  for (double v : shifted.speeds()) CHECK((v == 0.0 || v == 1.0 || v == 2.0));
  CHECK(same_matching(resolve_fast(sys), resolve_fast(shifted), 1e-9));
}

TEST_CASE("reflect") {
  SUBCASE("full-line example") {
    const ParticleSystem sys = test_support::full_line({0.0, 1.0}, {1.0, -1.0}, 0);
    const ParticleSystem out = reflect(sys);
    CHECK(out.positions() == std::vector<double>{-1.0, 0.0});
    CHECK(out.speeds() == std::vector<double>{1.0, -1.0});
    CHECK(out.origin_index() == 1);
  }
  SUBCASE("involution on full-line") {
    const ParticleSystem sys = sample_system(three_speed(0.3), Domain::full_line_palm, 50, Seed{2, 8});
    const ParticleSystem twice = reflect(reflect(sys));
    CHECK(twice.positions() == sys.positions());
    CHECK(twice.speeds() == sys.speeds());
  }
  SUBCASE("involution on half-line within 1e-12") {
    const ParticleSystem sys = sample_system(three_speed(0.3), Domain::half_line, 50, Seed{2, 9});
    const ParticleSystem twice = reflect(reflect(sys));
    REQUIRE(twice.size() == sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) {
      CHECK(twice.positions()[i] == doctest::Approx(sys.positions()[i]).epsilon(1e-12));
      CHECK(twice.speeds()[i] == sys.speeds()[i]);
    }
    CHECK(twice.positions().front() > 0.0);
  }
  SUBCASE("matching of reflect equals reflected matching (oracle, N <= 10)") {
    const auto laws = test_support::mixed_laws();
    for (int trial = 0; trial < 60; ++trial) {
      const SpeedLaw& law = laws[trial % laws.size()];
      const std::size_t n = 2 + trial % 9;
      const ParticleSystem sys =
          sample_system(law, Domain::half_line, n, Seed{100, static_cast<std::uint64_t>(trial)});
      const Outcome fwd = resolve_oracle(sys);
      const Outcome bwd = resolve_oracle(reflect(sys));
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        if (fwd.alive(i)) {
          CHECK(bwd.alive(j));
        } else {
          REQUIRE_FALSE(bwd.alive(j));
          CHECK(static_cast<std::size_t>(bwd.partner(j)) == n - 1 - fwd.partner(i));
          CHECK(bwd.death_time(j) == doctest::Approx(fwd.death_time(i)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("bullet_to_ballistic") {
  SUBCASE("worked two-bullet example") {
    const ParticleSystem sys = bullet_to_ballistic({0.0, 1.0}, {1.0, 2.0}, 0.0, 1.0);
    REQUIRE(sys.size() == 2);
    CHECK(sys.domain() == Domain::half_line);
    CHECK(sys.positions()[1] - sys.positions()[0] == 1.0);
    CHECK(sys.speeds()[0] == 1.0);
    CHECK(sys.speeds()[1] == 0.5);
    // the ballistic collision time equals the bullet collision coordinate
    const Outcome outcome = resolve_fast(sys);
    REQUIRE(outcome.collisions().size() == 1);
    CHECK(outcome.collisions()[0].time == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("single bullet survives") {
    const ParticleSystem sys = bullet_to_ballistic({0.5}, {3.0}, 0.0, 1.0);
    CHECK(resolve_fast(sys).alive(0));
  }
  SUBCASE("equal bullet speeds never collide") {
    const ParticleSystem sys = bullet_to_ballistic({0.0, 1.0, 2.5}, {2.0, 2.0, 2.0}, 0.0, 1.0);
    CHECK(resolve_fast(sys).collisions().empty());
  }
  SUBCASE("nonpositive alpha + beta w rejected") {
    CHECK_THROWS_AS(bullet_to_ballistic({0.0}, {1.0}, -2.0, 1.0), Error);
  }
  SUBCASE("inverse map recovers dyadic speeds exactly") {
    const std::vector<double> w = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> times;
    for (std::size_t i = 0; i < w.size(); ++i) times.push_back(static_cast<double>(i));
    const ParticleSystem sys = bullet_to_ballistic(times, w, 0.0, 1.0);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(1.0 / sys.speeds()[i] == w[i]);
  }
}

TEST_CASE("particle system validation") {
  CHECK_THROWS_AS(half_line({2.0, 1.0}, {0.0, 0.0}), Error);          // not increasing
  CHECK_THROWS_AS(half_line({0.0, 1.0}, {0.0, 0.0}), Error);          // not strictly positive
  CHECK_THROWS_AS(half_line({1.0}, {0.0, 1.0}), Error);               // length mismatch
  CHECK_THROWS_AS(test_support::full_line({-1.0, 0.5}, {0.0, 0.0}, 1), Error);  // origin not at 0
}
