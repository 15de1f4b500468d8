#include "shadowtrace/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "shadowtrace/aggregation.hpp"
#include "shadowtrace/rng.hpp"

namespace shadowtrace {

const char* to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Chain: return "chain";
    case TopologyKind::Tree: return "tree";
    case TopologyKind::Diamond: return "diamond";
    case TopologyKind::RandomDag: return "random-dag";
  }
  return "chain";
}

TopologyKind topology_from_string(const std::string& text) {
  if (text == "chain") return TopologyKind::Chain;
  if (text == "tree") return TopologyKind::Tree;
  if (text == "diamond") return TopologyKind::Diamond;
  if (text == "random-dag") return TopologyKind::RandomDag;
  throw Error(ErrorCode::InvalidSpec, "unknown topology: " + text);
}

namespace {

std::string component_name(int index, int total) {
  int width = 2;
  for (int limit = 100; total > limit; limit *= 10) ++width;
  std::string digits = std::to_string(index);
  return "c" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

std::string distributor_name(const MemberId& source) { return "d:" + source; }

void validate_spec(const ScenarioSpec& spec) {
  if (spec.active_count < 1) {
    throw Error(ErrorCode::InvalidSpec, "active_count must be >= 1");
  }
  if (spec.topology == TopologyKind::Diamond && spec.active_count < 4) {
    throw Error(ErrorCode::InvalidSpec, "diamond topology needs at least 4 active members");
  }
  if (spec.duration_s <= 0.0) throw Error(ErrorCode::InvalidSpec, "duration_s must be > 0");
  if (spec.tick_s <= 0.0) throw Error(ErrorCode::InvalidSpec, "tick_s must be > 0");
  if (spec.distributor_density < 0.0 || spec.distributor_density > 1.0) {
    throw Error(ErrorCode::InvalidSpec, "distributor_density must be within [0, 1]");
  }
}

// Logical active-to-active links per topology shape, as index pairs.
std::vector<std::pair<int, int>> shape_links(const ScenarioSpec& spec, SplitRng& rng) {
  std::vector<std::pair<int, int>> links;
  const int n = spec.active_count;
  switch (spec.topology) {
    case TopologyKind::Chain:
      for (int i = 0; i + 1 < n; ++i) links.emplace_back(i, i + 1);
      break;
    case TopologyKind::Tree:
      for (int i = 1; i < n; ++i) links.emplace_back((i - 1) / 2, i);
      break;
    case TopologyKind::Diamond: {
      // Source, two parallel branches, sink.
      const int sink = n - 1;
      const int middle = n - 2;
      const int first_branch = middle - middle / 2;
      int prev_a = 0, prev_b = 0;
      for (int i = 1; i <= first_branch; ++i) {
        links.emplace_back(prev_a, i);
        prev_a = i;
      }
      for (int i = first_branch + 1; i <= middle; ++i) {
        links.emplace_back(prev_b, i);
        prev_b = i;
      }
      links.emplace_back(prev_a, sink);
      if (prev_b != prev_a) links.emplace_back(prev_b, sink);
      break;
    }
    case TopologyKind::RandomDag:
      for (int i = 1; i < n; ++i) {
        const int parents = 1 + static_cast<int>(rng.uniform_int(2));
        std::set<int> chosen;
        for (int k = 0; k < parents; ++k) {
          chosen.insert(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i))));
        }
        for (int p : chosen) links.emplace_back(p, i);
      }
      break;
  }
  return links;
}

}  // namespace

SystemGraph generate_topology(const ScenarioSpec& spec) {
  validate_spec(spec);
  SplitRng rng(derive_seed(spec.seed, kTopologyStream));

  FieldSet active_fields, passive_fields;
  for (const auto& [field, _] : spec.active_metrics.baseline) active_fields.insert(field);
  for (const auto& [field, _] : spec.passive_metrics.baseline) passive_fields.insert(field);
  SystemGraph graph(AttributeSchema{active_fields, passive_fields}, 2);

  const int n = spec.active_count;
  std::vector<MemberId> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back(component_name(i, n));
    graph.add_member(names.back(), MemberKind::Active, spec.active_metrics.baseline);
  }

  const std::vector<std::pair<int, int>> links = shape_links(spec, rng);
  std::map<int, std::vector<int>> out_links;
  for (const auto& [src, dst] : links) out_links[src].push_back(dst);

  for (const auto& [src, dsts] : out_links) {
    if (rng.bernoulli(spec.distributor_density)) {
      const MemberId dist = distributor_name(names[static_cast<std::size_t>(src)]);
      graph.add_member(dist, MemberKind::Passive, spec.passive_metrics.baseline);
      graph.add_edge(names[static_cast<std::size_t>(src)], dist, 0);
      for (int dst : dsts) graph.add_edge(dist, names[static_cast<std::size_t>(dst)], 0);
    } else {
      for (int dst : dsts) {
        graph.add_edge(names[static_cast<std::size_t>(src)], names[static_cast<std::size_t>(dst)], 0);
      }
    }
  }

  // Synthetic launcher processes: one root, one launcher per group of
  // components, each component bound to its launcher.
  constexpr int kGroupSize = 5;
  const int groups = (n + kGroupSize - 1) / kGroupSize;
  std::vector<ProcessRecord> records;
  records.push_back(ProcessRecord{1, 0, "init", {{"cpu_fraction", 0.01}, {"rss_bytes", 2.0e7}}});
  for (int g = 0; g < groups; ++g) {
    records.push_back(ProcessRecord{10 + g, 1, "launcher-" + std::to_string(g),
                                    {{"cpu_fraction", 0.05}, {"rss_bytes", 5.0e7}}});
  }
  build_process_tree(graph, records, 1);
  std::map<MemberId, long long> bindings;
  for (int i = 0; i < n; ++i) bindings[names[static_cast<std::size_t>(i)]] = 10 + i / kGroupSize;
  bind_processes(graph, bindings, 1);

  return graph;
}

SimResult run(const SystemGraph& graph, const ScenarioSpec& spec,
              const std::vector<FaultSpec>& faults) {
  validate_spec(spec);
  for (const FaultSpec& fault : faults) {
    if (!graph.has_member(fault.root)) {
      throw Error(ErrorCode::UnknownFaultRoot, fault.root);
    }
    if (graph.kind(fault.root) != MemberKind::Active) {
      throw Error(ErrorCode::UnknownFaultRoot, fault.root + " is not an active member");
    }
    if (fault.start_s < 0.0 || fault.start_s >= spec.duration_s) {
      throw Error(ErrorCode::InvalidSpec, "fault start_s outside [0, duration_s)");
    }
    if (fault.probability < 0.0 || fault.probability > 1.0) {
      throw Error(ErrorCode::InvalidSpec, "fault probability must be within [0, 1]");
    }
  }

  SimResult result;
  if (!faults.empty()) result.truth.root = faults.front().root;

  // Tick times first: the last tick bounds which onsets are observable at
  // all, and k * tick_s avoids drift from repeated addition.
  std::vector<double> tick_times;
  for (std::size_t tick = 0;; ++tick) {
    const double now = static_cast<double>(tick) * spec.tick_s;
    if (now >= spec.duration_s) break;
    tick_times.push_back(now);
  }
  const double last_tick = tick_times.back();

  // Fault propagation: earliest-onset-first expansion over active-to-active
  // hops; each hop draws one Bernoulli and, when it passes, one normal lag.
  SplitRng prop_rng(derive_seed(spec.seed, kPropagationStream));
  struct Perturbation {
    std::string field;
    double delta;
  };
  std::map<MemberId, Perturbation> effects;
  std::map<MemberId, double> onsets;

  using QueueEntry = std::pair<double, MemberId>;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;

  auto relax = [&](const MemberId& member, double onset, const Perturbation& effect,
                   bool enqueue) {
    auto it = onsets.find(member);
    if (it != onsets.end() && it->second <= onset) return;
    onsets[member] = onset;
    effects[member] = effect;
    if (enqueue) queue.emplace(onset, member);
  };

  for (const FaultSpec& fault : faults) {
    relax(fault.root, fault.start_s, {fault.field, fault.delta}, true);
  }
  // All current faults share propagation parameters per spec entry; keep the
  // first as the governing one for hop sampling.
  const FaultSpec governing = faults.empty() ? FaultSpec{} : faults.front();

  std::set<MemberId> expanded;
  while (!queue.empty()) {
    const auto [onset, member] = queue.top();
    queue.pop();
    if (!expanded.insert(member).second) continue;
    for (const MemberId& peer : graph.active_peers(member, Direction::Successors)) {
      const bool crosses = prop_rng.bernoulli(governing.probability);
      if (!crosses) continue;
      const double lag = std::max(0.0, prop_rng.normal(governing.lag_mean_s, governing.lag_std_s));
      const double peer_onset = onset + lag;
      if (peer_onset > last_tick) continue;  // would never show in the log
      relax(peer, peer_onset, {governing.field, governing.delta}, true);

      // Record the traversed layer-0 edges, marking distributors en route.
      if (graph.has_edge(member, peer, 0)) {
        result.truth.propagation_edges.emplace(member, peer);
      } else {
        for (const MemberId& dist :
             graph.neighbors(member, Direction::Successors, KindFilter::PassiveOnly)) {
          if (!graph.has_edge(dist, peer, 0)) continue;
          result.truth.propagation_edges.emplace(member, dist);
          result.truth.propagation_edges.emplace(dist, peer);
          if (governing.affect_distributors && onset + lag / 2.0 <= last_tick) {
            relax(dist, onset + lag / 2.0,
                  {governing.distributor_field, governing.distributor_delta}, false);
          }
        }
      }
    }
  }
  result.truth.onsets = onsets;

  // Metric emission: per tick, per member (id order), per schema field
  // (name order) — one normal draw each, so the stream is replayable.
  SplitRng noise_rng(derive_seed(spec.seed, kNoiseStream));
  const std::set<MemberId> members = graph.member_ids();
  for (const double now : tick_times) {
    for (const MemberId& member : members) {
      if (is_process_member(member)) continue;  // process metrics are static
      const MetricModel& model =
          graph.kind(member) == MemberKind::Active ? spec.active_metrics : spec.passive_metrics;
      EventRecord record;
      record.timestamp = now;
      record.member = member;
      for (const auto& [field, baseline] : model.baseline) {
        double value = noise_rng.normal(baseline, model.noise_std.at(field));
        auto onset_it = onsets.find(member);
        if (onset_it != onsets.end() && now >= onset_it->second &&
            effects.at(member).field == field) {
          value += effects.at(member).delta;
        }
        record.metrics[field] = value;
      }
      result.events.push_back(std::move(record));
    }
  }
  return result;
}

std::string serialize_events(const std::vector<EventRecord>& events) {
  std::vector<json> lines;
  lines.reserve(events.size());
  for (const EventRecord& event : events) {
    json doc = json::object();
    doc["timestamp"] = event.timestamp;
    doc["member"] = event.member;
    doc["metrics"] = event.metrics;
    lines.push_back(std::move(doc));
  }
  return dump_canonical_lines(lines);
}

std::vector<EventRecord> events_from_jsonl(const std::string& text, const std::string& context) {
  std::vector<EventRecord> events;
  for (const json& doc : parse_json_lines(text, context)) {
    try {
      EventRecord event;
      event.timestamp = doc.at("timestamp").get<double>();
      event.member = doc.at("member").get<std::string>();
      for (auto it = doc.at("metrics").begin(); it != doc.at("metrics").end(); ++it) {
        event.metrics[it.key()] = it.value().get<double>();
      }
      events.push_back(std::move(event));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, context + ": " + e.what());
    }
  }
  return events;
}

std::vector<EventRecord> load_events(const std::filesystem::path& path) {
  return events_from_jsonl(read_file(path), path.string());
}

json ground_truth_to_json(const GroundTruth& truth) {
  json doc = json::object();
  doc["root"] = truth.root;
  doc["onsets"] = truth.onsets;
  json edges = json::array();
  for (const auto& [src, dst] : truth.propagation_edges) {
    edges.push_back(json::array({src, dst}));
  }
  doc["propagation_edges"] = std::move(edges);
  return doc;
}

GroundTruth ground_truth_from_json(const json& doc) {
  try {
    GroundTruth truth;
    truth.root = doc.at("root").get<std::string>();
    for (auto it = doc.at("onsets").begin(); it != doc.at("onsets").end(); ++it) {
      truth.onsets[it.key()] = it.value().get<double>();
    }
    for (const auto& e : doc.at("propagation_edges")) {
      truth.propagation_edges.emplace(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    return truth;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("ground truth: ") + e.what());
  }
}

}  // namespace shadowtrace
