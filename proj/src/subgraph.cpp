#include "shadowtrace/subgraph.hpp"

#include "shadowtrace/aggregation.hpp"

namespace shadowtrace {

InitOutcome init_from_config(const SystemGraph& graph, const std::vector<MemberId>& seeds) {
  InitOutcome outcome;
  for (const MemberId& seed : seeds) {
    if (!graph.has_member(seed)) {
      throw Error(ErrorCode::UnknownMember, "seed " + seed);
    }
    outcome.state.watchlist.insert(seed);
  }
  outcome.empty_seed = outcome.state.watchlist.empty();
  return outcome;
}

InitOutcome init_from_process_anomaly(const SystemGraph& graph, int process_layer,
                                      const SymptomPlugin& anomaly_rule) {
  if (process_layer < 1 || process_layer >= graph.layer_count()) {
    throw Error(ErrorCode::LayerOutOfRange, "process layer " + std::to_string(process_layer));
  }

  std::map<MemberId, std::vector<MemberId>> children;
  bool any_process = false;
  for (const Edge& e : graph.edges(process_layer)) {
    if (is_process_member(e.src)) {
      any_process = true;
      children[e.src].push_back(e.dst);
    }
  }
  if (!any_process) {
    throw Error(ErrorCode::NoProcessTree,
                "no process members on layer " + std::to_string(process_layer));
  }

  InitOutcome outcome;
  const AttributeHistory no_history;
  for (const auto& [proc, kids] : children) {
    if (!anomaly_rule.evaluate(proc, graph.attributes(proc), no_history)) continue;
    for (const MemberId& kid : kids) {
      // Child processes are not communication members; only bound components
      // belong on the watchlist.
      if (!is_process_member(kid)) outcome.state.watchlist.insert(kid);
    }
  }
  outcome.empty_seed = outcome.state.watchlist.empty();
  return outcome;
}

SubgraphState expand(const SystemGraph& graph, const SubgraphState& state,
                     const MemberId& alerted) {
  if (!state.watchlist.contains(alerted)) {
    throw Error(ErrorCode::NotWatched, alerted);
  }
  SubgraphState next = state;
  next.iteration = state.iteration + 1;
  // Edge rule ranges over the members of the previous iteration.
  for (const MemberId& member : state.members) {
    if (graph.has_edge(member, alerted, 0)) {
      next.edges.emplace(member, alerted);
    }
  }
  next.members.insert(alerted);
  for (const MemberId& successor : graph.neighbors(alerted, Direction::Successors)) {
    next.watchlist.insert(successor);
  }
  next.history.push_back(ExpansionEvent{next.iteration, alerted});
  return next;
}

SubgraphState snapshot(const SubgraphState& state) { return state; }

SubgraphState replay(const SystemGraph& graph, SubgraphState state,
                     std::span<const ExpansionEvent> events) {
  for (const ExpansionEvent& event : events) {
    state = expand(graph, state, event.member);
  }
  return state;
}

json state_to_json(const SubgraphState& state) {
  json doc = json::object();
  doc["iteration"] = state.iteration;
  doc["members"] = state.members;
  json edges = json::array();
  for (const auto& [src, dst] : state.edges) {
    edges.push_back(json::array({src, dst}));
  }
  doc["edges"] = std::move(edges);
  doc["watchlist"] = state.watchlist;
  json history = json::array();
  for (const ExpansionEvent& event : state.history) {
    json entry = json::object();
    entry["iteration"] = event.iteration;
    entry["member"] = event.member;
    history.push_back(std::move(entry));
  }
  doc["history"] = std::move(history);
  return doc;
}

SubgraphState state_from_json(const json& doc) {
  try {
    SubgraphState state;
    state.iteration = doc.at("iteration").get<std::uint64_t>();
    for (const auto& m : doc.at("members")) state.members.insert(m.get<std::string>());
    for (const auto& e : doc.at("edges")) {
      state.edges.emplace(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    for (const auto& w : doc.at("watchlist")) state.watchlist.insert(w.get<std::string>());
    for (const auto& h : doc.at("history")) {
      state.history.push_back(
          ExpansionEvent{h.at("iteration").get<std::uint64_t>(), h.at("member").get<std::string>()});
    }
    return state;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("state dump: ") + e.what());
  }
}

}  // namespace shadowtrace
