// The offline analysis pipeline: replay an event log tick by tick against
// the topology, run symptom detection over the watchlist, grow the dynamic
// subgraph on every alert, freeze it at the extraction trigger, then trace
// and rank fault trajectories from the initially detected symptom.

#pragma once

#include "shadowtrace/aggregation.hpp"
#include "shadowtrace/plugins.hpp"
#include "shadowtrace/report.hpp"
#include "shadowtrace/simulator.hpp"
#include "shadowtrace/subgraph.hpp"

namespace shadowtrace {

struct InitOptions {
  enum class Mode { Seeds, ProcessAnomaly };
  Mode mode = Mode::Seeds;
  std::vector<MemberId> seeds;  // "*" expands to every active member
  int process_layer = 1;
  json anomaly_rule;                                 // plugin config block
  std::vector<ProcessRecord> process_snapshot;       // refreshes proc members
  std::map<MemberId, long long> process_bindings;    // used when tree is absent
};

struct CorrelationOptions {
  bool use_co_occurrence = true;
  bool use_time_lag = true;
  IcpParams icp;
  double z_max = 3.0;
  double max_lag_horizon_s = 10.0;
};

struct ExtractionOptions {
  enum class Trigger { Demand, Quiescence };
  Trigger trigger = Trigger::Demand;  // Demand = extract when the log ends
  double quiescence_s = 5.0;
  std::optional<MemberId> initial;  // default: origin of the earliest alert
};

struct AnalyzeOptions {
  InitOptions init;
  json plugin_configs = json::array();
  DetectionConfig detection;  // refractory_s <= 0 defaults to one tick
  CorrelationOptions correlation;
  ExtractionOptions extraction;
};

struct AnalyzeResult {
  bool no_symptoms = false;
  bool empty_seed_warning = false;
  MemberId initial;
  SubgraphState snapshot;     // frozen at the extraction trigger
  AlertStore store;
  std::optional<LagModel> lag_model;
  std::vector<FaultTrajectory> ranked;
  std::vector<PluginFailure> failures;
  json report;
  std::string report_text;
};

AnalyzeResult analyze_events(SystemGraph graph, const std::vector<EventRecord>& events,
                             const AnalyzeOptions& options);

}  // namespace shadowtrace
