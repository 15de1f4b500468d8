// Deterministic scenario simulator: synthesizes pub/sub topologies, injects
// faults that propagate along communication paths, and emits a per-tick
// metric event log plus the ground truth needed to score the analysis
// pipeline. Identical (spec, faults) input yields byte-identical output.
//
// Simulated time is scenario seconds, decoupled from wall clock.

#pragma once

#include <filesystem>
#include <vector>

#include "shadowtrace/canonical_json.hpp"
#include "shadowtrace/graph.hpp"

namespace shadowtrace {

enum class TopologyKind { Chain, Tree, Diamond, RandomDag };

const char* to_string(TopologyKind kind);
TopologyKind topology_from_string(const std::string& text);

// Per-kind metric model: every member of a kind samples baseline + Gaussian
// noise each tick.
struct MetricModel {
  AttributeVector baseline;
  AttributeVector noise_std;
};

struct ScenarioSpec {
  std::uint64_t seed = 1;
  TopologyKind topology = TopologyKind::Chain;
  int active_count = 3;
  // Fraction of sources whose outgoing links run through a distributor
  // (shared per source) instead of direct send edges.
  double distributor_density = 1.0;
  double duration_s = 10.0;
  double tick_s = 0.1;
  MetricModel active_metrics{{{"cpu_fraction", 0.2}, {"rss_bytes", 1.0e8}},
                             {{"cpu_fraction", 0.02}, {"rss_bytes", 1.0e6}}};
  MetricModel passive_metrics{{{"queue_depth", 10.0}}, {{"queue_depth", 1.0}}};
};

struct FaultSpec {
  MemberId root;
  double start_s = 1.0;
  double lag_mean_s = 0.5;  // per active-to-active hop
  double lag_std_s = 0.05;
  double probability = 1.0;  // per hop
  std::string field = "cpu_fraction";
  double delta = 0.6;
  // Distributors on a traversed path show their own symptom.
  bool affect_distributors = true;
  std::string distributor_field = "queue_depth";
  double distributor_delta = 50.0;
};

struct GroundTruth {
  MemberId root;                                          // primary injected root cause
  std::map<MemberId, double> onsets;                      // every affected member
  std::set<std::pair<MemberId, MemberId>> propagation_edges;  // traversed layer-0 edges
};

struct EventRecord {
  double timestamp = 0.0;
  MemberId member;
  AttributeVector metrics;
};

struct SimResult {
  std::vector<EventRecord> events;
  GroundTruth truth;
};

// Deterministic for a given spec; members are named c00, c01, ... and a
// source's distributor d:<source>. Also synthesizes a layer-1 process tree
// with one launcher process per group of components and binds each component
// to its launcher.
SystemGraph generate_topology(const ScenarioSpec& spec);

SimResult run(const SystemGraph& graph, const ScenarioSpec& spec,
              const std::vector<FaultSpec>& faults);

// Event log: JSON Lines, one record per (tick, member).
std::string serialize_events(const std::vector<EventRecord>& events);
std::vector<EventRecord> events_from_jsonl(const std::string& text, const std::string& context);
std::vector<EventRecord> load_events(const std::filesystem::path& path);

json ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const json& doc);

// RNG stream tags; fixed so tests can replay the simulator's draws.
inline constexpr std::uint64_t kTopologyStream = 0x544f504fULL;     // "TOPO"
inline constexpr std::uint64_t kPropagationStream = 0x50524f50ULL;  // "PROP"
inline constexpr std::uint64_t kNoiseStream = 0x4e4f4953ULL;        // "NOIS"

}  // namespace shadowtrace
