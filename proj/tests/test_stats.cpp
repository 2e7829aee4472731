// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "ballistic/errors.hpp"
#include "ballistic/stats.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace ballistic;

namespace {

DensityCurve synthetic_curve(const std::vector<double>& times, double (*f)(double)) {
  DensityCurve curve;
  curve.times = times;
  DensityCurve::ClassCurve cc;
  cc.speed = 0.0;
  for (double t : times) {
    cc.estimate.push_back(f(t));
    cc.stderr_.push_back(0.0);
  }
  curve.classes.push_back(cc);
  curve.replicas = 1;
  return curve;
}

}  // namespace

TEST_CASE("geometric_times") {
  const auto times = geometric_times(100.0, 1000.0, 20);
  CHECK(times.size() == 21);
  CHECK(times.front() == 100.0);
  CHECK(times.back() == 1000.0);
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);
}

TEST_CASE("fit_exponent") {
  const auto times = geometric_times(1.0, 100.0, 10);
  SUBCASE("exact power law recovers the slope to 1e-12") {
    const DensityCurve curve = synthetic_curve(times, [](double t) { return std::pow(t, -2.0 / 3.0); });
    const ExponentFit fit = fit_exponent(curve, 0.0, 1.0, 100.0);
    CHECK(std::abs(fit.slope - (-2.0 / 3.0)) < 1e-12);
    CHECK(fit.points == times.size());
  }
  SUBCASE("constant curve has slope 0") {
    const DensityCurve curve = synthetic_curve(times, [](double) { return 0.37; });
    CHECK(std::abs(fit_exponent(curve, 0.0, 1.0, 100.0).slope) < 1e-12);
  }
  SUBCASE("insufficient points") {
    const DensityCurve curve = synthetic_curve(times, [](double t) { return 1.0 / t; });
    CHECK_THROWS_AS((void)fit_exponent(curve, 0.0, 1.0, 1.3), Error);
  }
  SUBCASE("nonpositive density") {
    DensityCurve curve = synthetic_curve(times, [](double) { return 1.0; });
    curve.classes[0].estimate[3] = 0.0;
    CHECK_THROWS_AS((void)fit_exponent(curve, 0.0, 1.0, 100.0), Error);
  }
  SUBCASE("unknown class") {
    const DensityCurve curve = synthetic_curve(times, [](double) { return 1.0; });
    CHECK_THROWS_AS((void)fit_exponent(curve, 5.0, 1.0, 100.0), Error);
  }
}

TEST_CASE("estimate_density on the all-zero law is exactly 1 with zero variance") {
  const DensityCurve curve =
      estimate_density(three_speed(1.0), 400, {0.0, 1.0, 10.0, 100.0}, 4, Seed{12, 0});
  const auto* c0 = curve.find_class(0.0);
  REQUIRE(c0 != nullptr);
  for (std::size_t ti = 0; ti < curve.times.size(); ++ti) {
    CHECK(c0->estimate[ti] == 1.0);
    CHECK(c0->stderr_[ti] == 0.0);
  }
}

TEST_CASE("estimate_density per-replica monotonicity and window") {
  const DensityCurve curve =
      estimate_density(three_speed(0.3), 2000, geometric_times(1.0, 50.0, 10), 6, Seed{13, 1});
  CHECK(curve.window_half_width > 0.0);
  for (const auto& cls : curve.classes) {
    for (std::size_t ti = 1; ti < curve.times.size(); ++ti) {
      CHECK(cls.estimate[ti] <= cls.estimate[ti - 1] + 1e-15);
    }
    for (std::size_t ti = 0; ti < curve.times.size(); ++ti) CHECK(cls.estimate[ti] >= 0.0);
  }
}

TEST_CASE("estimate_density window exhaustion") {
  CHECK_THROWS_AS((void)estimate_density(three_speed(0.3), 50, {1000.0}, 2, Seed{14, 0}), Error);
  try {
    (void)estimate_density(three_speed(0.3), 50, {1000.0}, 2, Seed{14, 0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window_exhausted);
  }
}

TEST_CASE("reference_density quoted values") {
  SUBCASE("supercritical zero-class limit") {
    const DensityReference ref = reference_density(0.5, 1.0, SpeedClass3::zero);
    CHECK(ref.is_limit);
    CHECK(ref.value == doctest::Approx(0.585786437626905).epsilon(1e-12));
  }
  SUBCASE("critical zero-class amplitude") {
    const DensityReference ref = reference_density(0.25, 1.0, SpeedClass3::zero);
    CHECK_FALSE(ref.is_limit);
    CHECK(ref.value == doctest::Approx(0.216433).epsilon(1e-5));
  }
  SUBCASE("subcritical zero-class value at t = 1") {
    const DensityReference ref = reference_density(0.2, 1.0, SpeedClass3::zero);
    CHECK(ref.value == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
  }
  SUBCASE("critical routing within 1e-6") {
    const DensityReference a = reference_density(0.25 + 5e-7, 2.0, SpeedClass3::zero);
    const DensityReference b = reference_density(0.25, 2.0, SpeedClass3::zero);
    CHECK(a.value == b.value);
  }
  SUBCASE("supercritical moving class is unavailable") {
    CHECK_THROWS_AS((void)reference_density(0.5, 1.0, SpeedClass3::plus_one), Error);
    try {
      (void)reference_density(0.5, 1.0, SpeedClass3::plus_one);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unavailable);
    }
  }
  SUBCASE("both subcritical moving-class candidates evaluate") {
    CHECK(reference_plus_decay_half(0.15, 4.0) ==
          doctest::Approx(std::sqrt(0.1 / std::numbers::pi) / 2.0).epsilon(1e-12));
    CHECK(reference_plus_decay_one(0.15, 4.0) ==
          doctest::Approx(std::sqrt(0.1 / std::numbers::pi) / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("wilson interval") {
  double lo = 0.0, hi = 0.0;
  wilson_interval(0, 100, lo, hi);
  CHECK(lo == 0.0);
  CHECK(hi > 0.0);
  wilson_interval(100, 100, lo, hi);
  CHECK(hi == 1.0);
  CHECK(lo < 1.0);
  wilson_interval(50, 100, lo, hi);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(lo > 0.4);
  CHECK(hi < 0.6);
  wilson_interval(1, 100, lo, hi);
  CHECK(lo > 0.0);
}

TEST_CASE("estimate_survival") {
  SUBCASE("all-zero law always survives") {
    const SurvivalEstimate est =
        estimate_survival(three_speed(1.0), Domain::full_line_palm, std::nullopt, 100, 10.0, 50, Seed{15, 0});
    CHECK(est.p_hat == 1.0);
    CHECK(est.ci_lo <= est.p_hat);
    CHECK(est.ci_hi >= est.p_hat);
  }
  SUBCASE("unsafe horizon is rejected") {
    CHECK_THROWS_AS((void)estimate_survival(three_speed(0.3), Domain::full_line_palm, std::nullopt,
                                            100, 1000.0, 4, Seed{16, 0}),
                    Error);
    try {
      (void)estimate_survival(three_speed(0.3), Domain::full_line_palm, std::nullopt, 100, 1000.0,
                              4, Seed{16, 0});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unsafe_horizon);
    }
  }
  SUBCASE("conditioning forces the origin speed") {
    // at p = 0 a forced 0-speed origin sits between ballistic +-1 particles;
    // the estimate must be well below 1 and the interval ordered
    const SurvivalEstimate est = estimate_survival(three_speed(0.0), Domain::full_line_palm, 0.0,
                                                   400, 50.0, 200, Seed{17, 0});
    CHECK(est.ci_lo <= est.p_hat);
    CHECK(est.p_hat <= est.ci_hi);
    CHECK(est.p_hat < 0.5);
  }
  SUBCASE("half-line +1 origin dies more with longer horizons (coupled seeds)") {
    double prev = 2.0;
    for (double horizon : {5.0, 10.0, 20.0}) {
      const SurvivalEstimate est = estimate_survival(three_speed(0.3), Domain::half_line, 1.0, 200,
                                                     horizon, 2000, Seed{18, 0});
      CHECK(est.p_hat <= prev);
      prev = est.p_hat;
    }
  }
}

TEST_CASE("sweep composition and parallelism independence") {
  SweepOptions options;
  options.n = 4000;
  options.horizon = 100.0;
  options.replicas = 40;
  options.density_replicas = 2;
  options.fit_t_lo = 5.0;
  options.fit_t_hi = 50.0;

  options.parallelism = 1;
  const SweepResult serial = sweep({0.2, 0.4}, Seed{19, 0}, options);
  options.parallelism = 3;
  const SweepResult parallel = sweep({0.2, 0.4}, Seed{19, 0}, options);

  REQUIRE(serial.points.size() == 2);
  for (std::size_t g = 0; g < 2; ++g) {
    CHECK(serial.points[g].survival.p_hat == parallel.points[g].survival.p_hat);
    CHECK(serial.points[g].survival.ci_lo == parallel.points[g].survival.ci_lo);
    CHECK(serial.points[g].exponent == parallel.points[g].exponent);
  }

  SUBCASE("size-1 grid equals a direct estimate with matching seeds") {
    options.parallelism = 2;
    const SweepResult one = sweep({0.4}, Seed{19, 0}, options);
    const SurvivalEstimate direct =
        estimate_survival(three_speed(0.4), Domain::full_line_palm, 0.0, options.n, options.horizon,
                          options.replicas, Seed{19, 0}.child(0x73777065).child(0));
    CHECK(one.points[0].survival.p_hat == direct.p_hat);
    CHECK(one.points[0].survival.ci_lo == direct.ci_lo);
  }

  SUBCASE("grid must increase") {
    CHECK_THROWS_AS((void)sweep({0.4, 0.2}, Seed{19, 0}, options), Error);
  }
}
