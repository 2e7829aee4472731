// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "ballistic/rng.hpp"
#include "doctest.h"

using namespace ballistic;

TEST_CASE("identical seeds give identical streams") {
  Rng a(Seed{12345, 67}, stream::speeds);
  Rng b(Seed{12345, 67}, stream::speeds);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct streams and replicas differ") {
  Rng a(Seed{1, 0}, stream::gaps_right);
  Rng b(Seed{1, 0}, stream::gaps_left);
  Rng c(Seed{1, 1}, stream::gaps_right);
  int equal_ab = 0, equal_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.next_u64();
    if (x == b.next_u64()) ++equal_ab;
    if (x == c.next_u64()) ++equal_ac;
  }
  CHECK(equal_ab == 0);
  CHECK(equal_ac == 0);
}

TEST_CASE("unit interval bounds") {
  Rng rng(Seed{7, 7}, 99);
  for (int i = 0; i < 100000; ++i) {
    const double oc = rng.next_unit_oc();
    CHECK(oc > 0.0);
    CHECK(oc <= 1.0);
    const double co = rng.next_unit_co();
    CHECK(co >= 0.0);
    CHECK(co < 1.0);
  }
}

TEST_CASE("exponential mean over 1e6 samples is 1.0 +- 0.01") {
  Rng rng(Seed{2024, 0}, stream::gaps_right);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.exponential();
    CHECK(g > 0.0);
    sum += g;
  }
  CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("left and right gap substreams are independent (chi-square, 0.999)") {
  // 2x2 contingency table on (gap > ln 2) indicators over 1e4 draws.
  const double median = std::log(2.0);
  long counts[2][2] = {{0, 0}, {0, 0}};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Rng right(Seed{555, static_cast<std::uint64_t>(i)}, stream::gaps_right);
    Rng left(Seed{555, static_cast<std::uint64_t>(i)}, stream::gaps_left);
    counts[right.exponential() > median ? 1 : 0][left.exponential() > median ? 1 : 0]++;
  }
  const double r1 = counts[1][0] + counts[1][1];
  const double c1 = counts[0][1] + counts[1][1];
  double chi2 = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double pa = a == 1 ? r1 / n : 1.0 - r1 / n;
      const double pb = b == 1 ? c1 / n : 1.0 - c1 / n;
      const double expected = pa * pb * n;
      chi2 += (counts[a][b] - expected) * (counts[a][b] - expected) / expected;
    }
  }
  CHECK(chi2 < 10.828);  // chi-square(1) quantile at 0.999
}

TEST_CASE("child seeds are deterministic and distinct") {
  const Seed s{42, 9};
  CHECK(s.child(3).replica == s.child(3).replica);
  CHECK(s.child(3).replica != s.child(4).replica);
  CHECK(s.child(3).master == s.master);
}
