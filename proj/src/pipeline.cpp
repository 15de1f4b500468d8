#include "shadowtrace/pipeline.hpp"

#include <algorithm>

namespace shadowtrace {

namespace {

InitOutcome initialize(SystemGraph& graph, const InitOptions& init) {
  if (init.mode == InitOptions::Mode::Seeds) {
    std::vector<MemberId> seeds;
    for (const MemberId& seed : init.seeds) {
      if (seed == "*") {
        for (const MemberId& id : graph.member_ids(MemberKind::Active)) {
          if (!is_process_member(id)) seeds.push_back(id);
        }
      } else {
        seeds.push_back(seed);
      }
    }
    return init_from_config(graph, seeds);
  }

  // Process-anomaly mode: refresh (or build) the process tree from the
  // snapshot, then watch every component under an anomalous process.
  if (!init.process_snapshot.empty()) {
    bool have_processes = false;
    for (const MemberId& id : graph.member_ids()) {
      if (is_process_member(id)) {
        have_processes = true;
        break;
      }
    }
    build_process_tree(graph, init.process_snapshot, init.process_layer);
    if (!have_processes && !init.process_bindings.empty()) {
      bind_processes(graph, init.process_bindings, init.process_layer);
    }
  }
  if (init.anomaly_rule.is_null()) {
    throw Error(ErrorCode::InvalidConfig, "process-anomaly init needs an anomaly rule");
  }
  const std::shared_ptr<SymptomPlugin> rule = make_plugin(init.anomaly_rule);
  return init_from_process_anomaly(graph, init.process_layer, *rule);
}

double infer_tick(const std::map<double, std::vector<const EventRecord*>>& ticks) {
  if (ticks.size() < 2) return 0.0;
  auto it = ticks.begin();
  const double first = it->first;
  return std::next(it)->first - first;
}

}  // namespace

AnalyzeResult analyze_events(SystemGraph graph, const std::vector<EventRecord>& events,
                             const AnalyzeOptions& options) {
  AnalyzeResult result;

  InitOutcome init = initialize(graph, options.init);
  result.empty_seed_warning = init.empty_seed;
  SubgraphState state = std::move(init.state);

  // Group by timestamp; within one tick events apply in member order.
  std::map<double, std::vector<const EventRecord*>> ticks;
  for (const EventRecord& event : events) {
    ticks[event.timestamp].push_back(&event);
  }

  DetectionConfig detection = options.detection;
  if (detection.refractory_s <= 0.0) {
    detection.refractory_s = infer_tick(ticks);  // one tick by default
  }
  DetectionEngine engine(registry_from_config(options.plugin_configs), detection);

  bool frozen = false;
  double last_alert_time = 0.0;
  for (auto& [now, records] : ticks) {
    if (options.extraction.trigger == ExtractionOptions::Trigger::Quiescence &&
        result.store.size() > 0 && now - last_alert_time >= options.extraction.quiescence_s) {
      result.snapshot = snapshot(state);
      frozen = true;
      break;
    }

    std::sort(records.begin(), records.end(),
              [](const EventRecord* a, const EventRecord* b) { return a->member < b->member; });
    for (const EventRecord* record : records) {
      graph.set_attributes(record->member, record->metrics);
    }

    std::vector<Alert> alerts = engine.evaluate_tick(graph, state.watchlist, now);
    for (const PluginFailure& failure : engine.failures()) {
      result.failures.push_back(failure);
    }
    std::sort(alerts.begin(), alerts.end(), [](const Alert& a, const Alert& b) {
      return std::tie(a.timestamp, a.origin, a.label) < std::tie(b.timestamp, b.origin, b.label);
    });
    for (const Alert& alert : alerts) {
      result.store.record(alert);
      state = expand(graph, state, alert.origin);
      last_alert_time = alert.timestamp;
    }
  }
  if (!frozen) {
    result.snapshot = snapshot(state);
  }

  if (result.store.size() == 0) {
    result.no_symptoms = true;
    ReportInputs inputs;
    inputs.no_symptoms = true;
    result.report = make_report(inputs);
    result.report_text = render_report_text(result.report);
    return result;
  }

  // Default initial symptom: origin of the earliest alert, ties by id.
  if (options.extraction.initial) {
    result.initial = *options.extraction.initial;
  } else {
    const std::vector<Alert> log = result.store.log();
    const Alert* earliest = &log.front();
    for (const Alert& alert : log) {
      if (std::tie(alert.timestamp, alert.origin) <
          std::tie(earliest->timestamp, earliest->origin)) {
        earliest = &alert;
      }
    }
    result.initial = earliest->origin;
  }

  TraceParams trace_params;
  trace_params.use_co_occurrence = options.correlation.use_co_occurrence;
  trace_params.icp = options.correlation.icp;
  trace_params.z_max = options.correlation.z_max;
  trace_params.use_time_lag = false;
  std::vector<std::string> methods;
  if (options.correlation.use_co_occurrence) {
    methods.push_back(to_string(CorrelationMethod::CoOccurrence));
  }
  if (options.correlation.use_time_lag) {
    const LagModel model = estimate_lag_model(result.store, result.snapshot.edges,
                                              options.correlation.max_lag_horizon_s);
    if (model.usable()) {
      trace_params.use_time_lag = true;
      trace_params.lag_model = model;
      result.lag_model = model;
      methods.push_back(to_string(CorrelationMethod::TimeLag));
    }
    // An unusable model just drops the method for this run.
  }

  result.ranked = rank(trace(result.snapshot, result.store, result.initial, trace_params));

  ReportInputs inputs;
  inputs.initial = result.initial;
  inputs.methods = std::move(methods);
  inputs.lag_model = result.lag_model;
  inputs.ranked = result.ranked;
  inputs.snapshot = result.snapshot;
  inputs.alert_count = result.store.size();
  result.report = make_report(inputs);
  result.report_text = render_report_text(result.report);
  return result;
}

}  // namespace shadowtrace
