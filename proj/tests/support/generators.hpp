// Seeded random graphs, trees and alert sequences for property tests, plus
// the raw member/edge bookkeeping the independent oracles operate on. The
// oracles in oracles.hpp only ever read these plain containers, never the
// SystemGraph under test.

#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "shadowtrace/graph.hpp"
#include "shadowtrace/rng.hpp"

namespace shadowtrace::testsupport {

struct RawGraph {
  std::map<MemberId, MemberKind> kinds;
  std::set<std::tuple<MemberId, MemberId, int>> edges;  // (src, dst, layer)
  int layer_count = 2;
  SystemGraph graph;
};

inline AttributeSchema test_schema() {
  return AttributeSchema{{"cpu", "mem"}, {"queue"}};
}

inline AttributeVector attrs_for(MemberKind kind, SplitRng& rng, bool integer_valued = false) {
  auto value = [&]() {
    return integer_valued ? static_cast<double>(rng.uniform_int(10)) : rng.uniform(0.0, 2.0);
  };
  if (kind == MemberKind::Active) return {{"cpu", value()}, {"mem", value()}};
  return {{"queue", value()}};
}

// Random mixed-kind graph. Edge insertion attempts go through the graph API;
// only accepted edges land in the raw edge set, so graph and raw data stay
// in lockstep while rejection paths still get exercised.
inline RawGraph random_graph(std::uint64_t seed, int max_members, bool integer_attrs = false) {
  SplitRng rng(seed);
  const int n = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_members)));
  RawGraph raw{.kinds = {}, .edges = {}, .layer_count = 2, .graph = SystemGraph(test_schema(), 2)};

  std::vector<MemberId> ids;
  for (int i = 0; i < n; ++i) {
    const MemberKind kind = rng.bernoulli(0.6) ? MemberKind::Active : MemberKind::Passive;
    const MemberId id = "m" + std::to_string(i);
    raw.graph.add_member(id, kind, attrs_for(kind, rng, integer_attrs));
    raw.kinds[id] = kind;
    ids.push_back(id);
  }

  const int attempts = 3 * n;
  for (int i = 0; i < attempts; ++i) {
    const MemberId& src = ids[rng.uniform_int(ids.size())];
    const MemberId& dst = ids[rng.uniform_int(ids.size())];
    const int layer = rng.bernoulli(0.75) ? 0 : 1;
    try {
      raw.graph.add_edge(src, dst, layer);
      raw.edges.emplace(src, dst, layer);
    } catch (const Error&) {
      // invalid pair (kind typing, self loop, tree rule); skipped by design
    }
  }
  return raw;
}

struct RawTree {
  std::vector<MemberId> members;              // members[0] is the root
  std::map<MemberId, MemberId> parent;        // no entry for the root
  SystemGraph graph;
};

// Random rooted tree on layer 1: parent(i) drawn among earlier members.
inline RawTree random_tree(std::uint64_t seed, int node_count, bool integer_attrs,
                           double passive_fraction = 0.25) {
  SplitRng rng(seed);
  RawTree raw{.members = {}, .parent = {}, .graph = SystemGraph(test_schema(), 2)};
  for (int i = 0; i < node_count; ++i) {
    const MemberKind kind =
        rng.bernoulli(passive_fraction) ? MemberKind::Passive : MemberKind::Active;
    const MemberId id = "t" + std::to_string(i);
    raw.graph.add_member(id, kind, attrs_for(kind, rng, integer_attrs));
    raw.members.push_back(id);
    if (i > 0) {
      const MemberId& parent = raw.members[rng.uniform_int(static_cast<std::uint64_t>(i))];
      raw.graph.add_edge(parent, id, 1);
      raw.parent[id] = parent;
    }
  }
  return raw;
}

}  // namespace shadowtrace::testsupport
