#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "shadowtrace/correlation.hpp"
#include "shadowtrace/rng.hpp"

using namespace shadowtrace;

namespace {

AlertSeries series(MemberId member, std::vector<double> timestamps) {
  std::sort(timestamps.begin(), timestamps.end());
  return AlertSeries{std::move(member), std::move(timestamps)};
}

}  // namespace

TEST_CASE("co_occurrence of identical series is exact") {
  const AlertSeries a = series("a", {1.0, 2.0, 3.0});
  const DependencyVerdict verdict = co_occurrence(a, series("b", {1.0, 2.0, 3.0}));
  CHECK(verdict.dependent);
  CHECK(verdict.offset_or_lag == 0.0);
  CHECK(verdict.strength == 1.0);
}

TEST_CASE("co_occurrence recovers a clean shift exactly") {
  std::vector<double> base;
  SplitRng rng(11);
  for (int i = 0; i < 20; ++i) base.push_back(rng.uniform(0.0, 30.0));
  std::vector<double> shifted;
  for (double t : base) shifted.push_back(t + 0.7);

  const IcpParams params;
  const DependencyVerdict verdict = co_occurrence(series("a", base), series("b", shifted), params);
  CHECK(verdict.dependent);
  CHECK(std::abs(verdict.offset_or_lag - 0.7) <= params.converge_eps_s);
  CHECK(verdict.strength > 0.9);
}

TEST_CASE("far-apart series are not co-occurrent at any plausible offset") {
  std::vector<double> a_stamps, b_stamps;
  for (int i = 0; i <= 10; ++i) {
    a_stamps.push_back(static_cast<double>(i));
    b_stamps.push_back(1000.0 + static_cast<double>(i));
  }
  IcpParams params;
  params.match_window_s = 1.0;
  const DependencyVerdict verdict =
      co_occurrence(series("a", a_stamps), series("b", b_stamps), params);
  CHECK_FALSE(verdict.dependent);
  CHECK(verdict.strength == 0.0);
}

TEST_CASE("co_occurrence handles degenerate inputs") {
  const DependencyVerdict verdict = co_occurrence(series("a", {}), series("b", {1.0}));
  CHECK_FALSE(verdict.dependent);
  CHECK(verdict.strength == 0.0);
  const DependencyVerdict both_empty = co_occurrence(series("a", {}), series("b", {}));
  CHECK_FALSE(both_empty.dependent);
}

TEST_CASE("co_occurrence symmetry: swapping the series negates the offset") {
  SUBCASE("clean shifts negate within the convergence epsilon") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      SplitRng rng(800 + seed);
      std::vector<double> a_stamps, b_stamps;
      const double offset = rng.uniform(-4.0, 4.0);
      for (int i = 0; i < 15; ++i) {
        const double t = rng.uniform(0.0, 40.0);
        a_stamps.push_back(t);
        b_stamps.push_back(t + offset);
      }
      const IcpParams params;
      const DependencyVerdict forward =
          co_occurrence(series("a", a_stamps), series("b", b_stamps), params);
      const DependencyVerdict backward =
          co_occurrence(series("b", b_stamps), series("a", a_stamps), params);
      CHECK(forward.dependent);
      CHECK(forward.dependent == backward.dependent);
      CHECK(std::abs(forward.offset_or_lag + backward.offset_or_lag) <=
            2 * params.converge_eps_s);
    }
  }

  SUBCASE("jittered shifts preserve dependence and negate at jitter scale") {
    // Point jitter makes the nearest-neighbor matching slightly asymmetric,
    // so the recovered offsets only negate up to the jitter magnitude.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      SplitRng rng(800 + seed);
      std::vector<double> a_stamps, b_stamps;
      const double offset = rng.uniform(-4.0, 4.0);
      const double jitter = 0.02;
      for (int i = 0; i < 15; ++i) {
        const double t = rng.uniform(0.0, 40.0);
        a_stamps.push_back(t);
        b_stamps.push_back(t + offset + rng.normal(0.0, jitter));
      }
      const DependencyVerdict forward =
          co_occurrence(series("a", a_stamps), series("b", b_stamps));
      const DependencyVerdict backward =
          co_occurrence(series("b", b_stamps), series("a", a_stamps));
      CHECK(forward.dependent == backward.dependent);
      CHECK(std::abs(forward.offset_or_lag + backward.offset_or_lag) <= 2 * jitter);
    }
  }
}

TEST_CASE("co_occurrence is translation invariant") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    SplitRng rng(900 + seed);
    std::vector<double> a_stamps, b_stamps;
    for (int i = 0; i < 12; ++i) {
      const double t = rng.uniform(0.0, 20.0);
      a_stamps.push_back(t);
      b_stamps.push_back(t + 0.4 + rng.normal(0.0, 0.05));
    }
    const double shift = rng.uniform(-50.0, 50.0);
    std::vector<double> a_shifted = a_stamps, b_shifted = b_stamps;
    for (double& t : a_shifted) t += shift;
    for (double& t : b_shifted) t += shift;

    const DependencyVerdict base = co_occurrence(series("a", a_stamps), series("b", b_stamps));
    const DependencyVerdict moved =
        co_occurrence(series("a", a_shifted), series("b", b_shifted));
    CHECK(base.dependent == moved.dependent);
    CHECK(base.strength == doctest::Approx(moved.strength).epsilon(1e-9));
  }
}

TEST_CASE("lag collection and model estimation") {
  SUBCASE("constant lag") {
    AlertStore store;
    for (double t : {0.0, 1.0, 2.0}) store.record({"u", t, "x", 1.0});
    for (double t : {0.5, 1.5, 2.5}) store.record({"v", t, "x", 1.0});
    const LagModel model = estimate_lag_model(store, {{"u", "v"}});
    CHECK(model.usable());
    CHECK(model.count == 3);
    CHECK(model.mean == doctest::Approx(0.5));
    CHECK(model.stddev == doctest::Approx(0.0));
  }

  SUBCASE("no response inside the horizon marks the model unusable") {
    AlertStore store;
    for (double t : {0.0, 1.0, 2.0}) store.record({"u", t, "x", 1.0});
    store.record({"v", 500.0, "x", 1.0});
    const LagModel model = estimate_lag_model(store, {{"u", "v"}}, 10.0);
    CHECK_FALSE(model.usable());
  }

  SUBCASE("seeded uniform lags land near their true mean") {
    SplitRng rng(321);
    AlertStore store;
    std::vector<double> lags;
    double t = 0.0;
    for (int i = 0; i < 100; ++i) {
      t += 5.0;  // spaced out so first-response matching is unambiguous
      const double lag = rng.uniform(0.4, 0.6);
      lags.push_back(lag);
      store.record({"u", t, "x", 1.0});
      store.record({"v", t + lag, "x", 1.0});
    }
    const LagModel model = estimate_lag_model(store, {{"u", "v"}});
    CHECK(model.count == 100);
    // Oracle: direct statistics of the generated lags.
    double mean = 0.0;
    for (double lag : lags) mean += lag;
    mean /= static_cast<double>(lags.size());
    CHECK(model.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(model.mean > 0.45);
    CHECK(model.mean < 0.55);
  }
}

TEST_CASE("time_lag verdicts") {
  LagModel model;
  model.mean = 0.5;
  model.stddev = 0.1;
  model.count = 50;
  model.horizon_s = 10.0;

  SUBCASE("pair lag at the model mean has strength 1") {
    const DependencyVerdict verdict =
        time_lag(series("u", {0.0, 1.0}), series("v", {0.5, 1.5}), model, 3.0);
    CHECK(verdict.dependent);
    CHECK(verdict.strength == 1.0);
    CHECK(verdict.offset_or_lag == doctest::Approx(0.5));
  }

  SUBCASE("a 45-sigma deviation is rejected") {
    const DependencyVerdict verdict =
        time_lag(series("u", {0.0}), series("v", {5.0}), model, 3.0);
    CHECK_FALSE(verdict.dependent);
    CHECK(verdict.strength == 0.0);
  }

  SUBCASE("unusable model throws") {
    LagModel thin;
    thin.count = 2;
    CHECK_THROWS_AS(time_lag(series("u", {0.0}), series("v", {0.5}), thin, 3.0), Error);
  }

  SUBCASE("pair with no lags inside the horizon is simply not dependent") {
    const DependencyVerdict verdict =
        time_lag(series("u", {0.0}), series("v", {500.0}), model, 3.0);
    CHECK_FALSE(verdict.dependent);
    CHECK(verdict.strength == 0.0);
  }

  SUBCASE("std floor keeps constant-lag models usable") {
    LagModel constant;
    constant.mean = 0.5;
    constant.stddev = 0.0;
    constant.count = 10;
    constant.horizon_s = 10.0;
    const DependencyVerdict verdict =
        time_lag(series("u", {0.0}), series("v", {0.505}), constant, 3.0);
    CHECK(verdict.dependent);  // 0.005 deviation within 3 * floor(0.01)
  }
}
