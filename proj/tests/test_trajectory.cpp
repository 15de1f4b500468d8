#include <doctest.h>

#include <algorithm>

#include "shadowtrace/trajectory.hpp"
#include "support/generators.hpp"

using namespace shadowtrace;
using namespace shadowtrace::testsupport;

namespace {

// Persistent 1 Hz alerts from `onset` to `until`.
void emit_alerts(AlertStore& store, const MemberId& member, double onset, double until) {
  for (double t = onset; t <= until; t += 1.0) {
    store.record({member, t, "cpu-high", 1.0});
  }
}

SubgraphState full_snapshot(const std::set<MemberId>& members,
                            const std::set<std::pair<MemberId, MemberId>>& edges) {
  SubgraphState state;
  state.members = members;
  state.edges = edges;
  return state;
}

}  // namespace

TEST_CASE("trace walks a chain back to the fault origin") {
  AlertStore store;
  emit_alerts(store, "a", 1.0, 8.0);
  emit_alerts(store, "b", 1.5, 8.5);
  emit_alerts(store, "c", 2.0, 9.0);
  const SubgraphState snap = full_snapshot({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});

  const std::vector<FaultTrajectory> trajectories = trace(snap, store, "c");
  REQUIRE(trajectories.size() == 1);
  CHECK(trajectories[0].members == std::vector<MemberId>{"c", "b", "a"});
  CHECK(trajectories[0].root_cause() == "a");
  CHECK(trajectories[0].length() == 2);
  for (double s : trajectories[0].strengths) {
    CHECK(s > 0.0);
    CHECK(s <= 1.0);
  }
  CHECK(trajectories[0].avg_strength ==
        doctest::Approx((trajectories[0].strengths[0] + trajectories[0].strengths[1]) / 2.0));
}

TEST_CASE("a member with no alerted predecessors is its own degenerate trajectory") {
  AlertStore store;
  emit_alerts(store, "x", 1.0, 4.0);
  const SubgraphState snap = full_snapshot({"x", "y"}, {{"y", "x"}});  // y never alerted

  const std::vector<FaultTrajectory> trajectories = trace(snap, store, "x");
  REQUIRE(trajectories.size() == 1);
  CHECK(trajectories[0].members == std::vector<MemberId>{"x"});
  CHECK(trajectories[0].length() == 0);
  CHECK(trajectories[0].avg_strength == 0.0);
  CHECK(trajectories[0].root_cause() == "x");
}

TEST_CASE("diamond produces one trajectory per alerted path") {
  AlertStore store;
  emit_alerts(store, "a", 1.0, 8.0);
  emit_alerts(store, "b", 1.5, 8.5);
  emit_alerts(store, "c", 1.5, 8.5);
  emit_alerts(store, "d", 2.0, 9.0);
  const SubgraphState snap =
      full_snapshot({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}});

  const std::vector<FaultTrajectory> trajectories = trace(snap, store, "d");
  REQUIRE(trajectories.size() == 2);
  std::set<std::vector<MemberId>> paths;
  for (const FaultTrajectory& t : trajectories) {
    paths.insert(t.members);
    CHECK(t.root_cause() == "a");
  }
  CHECK(paths == std::set<std::vector<MemberId>>{{"d", "b", "a"}, {"d", "c", "a"}});
}

TEST_CASE("trace rejects bad initial members") {
  AlertStore store;
  emit_alerts(store, "a", 1.0, 3.0);
  const SubgraphState snap = full_snapshot({"a", "b"}, {{"a", "b"}});

  try {
    trace(snap, store, "zz");
    FAIL("expected NotInSubgraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInSubgraph);
  }
  try {
    trace(snap, store, "b");  // in the subgraph but silent
    FAIL("expected NoAlerts");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoAlerts);
  }
}

TEST_CASE("time-lag method requires a usable model") {
  AlertStore store;
  emit_alerts(store, "a", 1.0, 3.0);
  const SubgraphState snap = full_snapshot({"a"}, {});
  TraceParams params;
  params.use_time_lag = true;  // lag_model left unusable
  CHECK_THROWS_AS(trace(snap, store, "a", params), Error);
}

TEST_CASE("trajectories never repeat members and follow snapshot edges upstream") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const RawGraph raw = random_graph(52000 + seed, 18);
    SplitRng rng(seed);

    std::set<MemberId> members;
    std::set<std::pair<MemberId, MemberId>> edges;
    for (const auto& [src, dst, layer] : raw.edges) {
      if (layer != 0) continue;
      edges.emplace(src, dst);
      members.insert(src);
      members.insert(dst);
    }
    if (members.empty()) continue;

    AlertStore store;
    MemberId initial;
    for (const MemberId& member : members) {
      if (rng.bernoulli(0.7)) {
        const double onset = 1.0 + rng.uniform(0.0, 2.0);
        emit_alerts(store, member, onset, onset + 6.0);
        if (initial.empty()) initial = member;
      }
    }
    if (initial.empty()) continue;

    const std::vector<FaultTrajectory> trajectories =
        trace(full_snapshot(members, edges), store, initial);
    CHECK(!trajectories.empty());
    for (const FaultTrajectory& t : trajectories) {
      CHECK(t.members.front() == initial);
      std::set<MemberId> seen(t.members.begin(), t.members.end());
      CHECK(seen.size() == t.members.size());  // no repeats
      CHECK(t.strengths.size() + 1 == t.members.size());
      for (std::size_t i = 0; i + 1 < t.members.size(); ++i) {
        CHECK(edges.contains({t.members[i + 1], t.members[i]}));  // upstream hop
      }
    }
  }
}

TEST_CASE("rank ordering rules") {
  FaultTrajectory strong;
  strong.members = {"a", "b", "c"};
  strong.strengths = {0.9, 0.9};
  strong.avg_strength = 0.9;

  FaultTrajectory weak;
  weak.members = {"a", "x", "y", "z", "w"};
  weak.strengths = {0.5, 0.5, 0.5, 0.5};
  weak.avg_strength = 0.5;

  SUBCASE("strength dominates length") {
    const auto ranked = rank({weak, strong});
    CHECK(ranked[0].members == strong.members);
    CHECK(ranked[1].members == weak.members);
  }

  SUBCASE("equal strength: longer first") {
    FaultTrajectory longer = strong;
    longer.members = {"a", "b", "c", "d"};
    longer.strengths = {0.9, 0.9, 0.9};
    const auto ranked = rank({strong, longer});
    CHECK(ranked[0].members == longer.members);
  }

  SUBCASE("full tie: lexicographic member sequence") {
    FaultTrajectory other = strong;
    other.members = {"a", "b", "d"};
    const auto ranked = rank({other, strong});
    CHECK(ranked[0].members == strong.members);
  }
}

TEST_CASE("rank is a deterministic permutation (property)") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitRng rng(66000 + seed);
    std::vector<FaultTrajectory> input;
    const std::size_t n = 1 + rng.uniform_int(12);
    for (std::size_t i = 0; i < n; ++i) {
      FaultTrajectory t;
      const std::size_t len = 1 + rng.uniform_int(4);
      t.members.push_back("m" + std::to_string(rng.uniform_int(6)));
      for (std::size_t k = 0; k < len; ++k) {
        t.members.push_back("m" + std::to_string(rng.uniform_int(6)) + std::to_string(k));
        t.strengths.push_back(static_cast<double>(rng.uniform_int(5)) / 4.0);
      }
      double sum = 0.0;
      for (double s : t.strengths) sum += s;
      t.avg_strength = sum / static_cast<double>(t.strengths.size());
      input.push_back(std::move(t));
    }

    const std::vector<FaultTrajectory> ranked = rank(input);
    REQUIRE(ranked.size() == input.size());

    // Permutation: same multiset of trajectories.
    auto key = [](const FaultTrajectory& t) { return t.members; };
    std::vector<std::vector<MemberId>> in_keys, out_keys;
    for (const auto& t : input) in_keys.push_back(key(t));
    for (const auto& t : ranked) out_keys.push_back(key(t));
    std::sort(in_keys.begin(), in_keys.end());
    std::sort(out_keys.begin(), out_keys.end());
    CHECK(in_keys == out_keys);

    // Comparator order holds pairwise.
    for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
      const FaultTrajectory& x = ranked[i];
      const FaultTrajectory& y = ranked[i + 1];
      const bool ordered =
          x.avg_strength > y.avg_strength ||
          (x.avg_strength == y.avg_strength &&
           (x.length() > y.length() ||
            (x.length() == y.length() && x.members <= y.members)));
      CHECK(ordered);
    }

    // Determinism: shuffling the input does not change the output.
    std::vector<FaultTrajectory> shuffled = input;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.uniform_int(i)]);
    }
    const std::vector<FaultTrajectory> reranked = rank(shuffled);
    std::vector<std::vector<MemberId>> a_seq, b_seq;
    for (const auto& t : ranked) a_seq.push_back(t.members);
    for (const auto& t : reranked) b_seq.push_back(t.members);
    CHECK(a_seq == b_seq);
  }
}
