// Alert-driven subgraph growth. The state at iteration j holds the members
// and layer-0 edges pulled in so far plus the watchlist feeding detection.
// An alert for watched member m advances the state by one iteration:
//   members' = members + {m}
//   edges'   = edges + every layer-0 edge from a current member into m
//   watch'   = watch + all layer-0 successors of m
// Members, edges and watchlist only ever grow, and every edge endpoint is a
// subgraph member.

#pragma once

#include <cstdint>
#include <span>

#include "shadowtrace/canonical_json.hpp"
#include "shadowtrace/detection.hpp"
#include "shadowtrace/graph.hpp"

namespace shadowtrace {

struct ExpansionEvent {
  std::uint64_t iteration = 0;  // the iteration this expansion produced
  MemberId member;

  auto operator<=>(const ExpansionEvent&) const = default;
};

struct SubgraphState {
  std::uint64_t iteration = 0;
  std::set<MemberId> members;
  std::set<std::pair<MemberId, MemberId>> edges;  // layer-0 (src, dst)
  Watchlist watchlist;
  std::vector<ExpansionEvent> history;

  bool operator==(const SubgraphState&) const = default;
};

struct InitOutcome {
  SubgraphState state;
  // Warning-level: an empty watchlist leaves the pipeline inert until
  // something else populates it.
  bool empty_seed = false;
};

// Seed the watchlist directly from configuration. The subgraph itself starts
// empty; nothing can be added before the first alert.
InitOutcome init_from_config(const SystemGraph& graph, const std::vector<MemberId>& seeds);

// Seed the watchlist with every component bound under a process member whose
// attributes trigger `anomaly_rule`. Requires a process tree on the layer.
InitOutcome init_from_process_anomaly(const SystemGraph& graph, int process_layer,
                                      const SymptomPlugin& anomaly_rule);

// Returns the next iteration's state. Throws NotWatched unless the alerted
// member is on the current watchlist.
SubgraphState expand(const SystemGraph& graph, const SubgraphState& state,
                     const MemberId& alerted);

// Immutable copy frozen at the current iteration.
SubgraphState snapshot(const SubgraphState& state);

// Re-apply a logged expansion sequence on top of an initial state.
SubgraphState replay(const SystemGraph& graph, SubgraphState initial,
                     std::span<const ExpansionEvent> events);

json state_to_json(const SubgraphState& state);
SubgraphState state_from_json(const json& doc);

}  // namespace shadowtrace
