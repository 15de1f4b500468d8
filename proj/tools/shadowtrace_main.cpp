// shadowtrace CLI: simulate scenarios, analyze event logs into ranked fault
// trajectories, and inspect topology or subgraph-state files.
//
// Exit codes: 0 success, 2 parse/config error, 3 I/O error, 4 no symptoms.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "shadowtrace/pipeline.hpp"
#include "shadowtrace/topology_io.hpp"

namespace fs = std::filesystem;
using namespace shadowtrace;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoSymptoms = 4;

int exit_code_for(const Error& error) {
  return error.code() == ErrorCode::IoError ? kExitIo : kExitConfig;
}

json load_config(const std::string& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::InvalidConfig, "config file not found: " + path);
  }
  return parse_json(read_file(path), path);
}

ScenarioSpec scenario_from_config(const json& config) {
  if (!config.contains("scenario")) {
    throw Error(ErrorCode::InvalidConfig, "config needs a \"scenario\" block");
  }
  const json& block = config.at("scenario");
  ScenarioSpec spec;
  try {
    spec.seed = block.value("seed", std::uint64_t{1});
    spec.topology = topology_from_string(block.value("topology", std::string("chain")));
    spec.active_count = block.value("active_count", 3);
    spec.distributor_density = block.value("distributor_density", 1.0);
    spec.duration_s = block.value("duration_s", 10.0);
    spec.tick_s = block.value("tick_s", 0.1);
    if (block.contains("metrics")) {
      auto read_model = [](const json& m, MetricModel& model) {
        if (m.contains("baseline")) {
          model.baseline.clear();
          for (auto it = m.at("baseline").begin(); it != m.at("baseline").end(); ++it) {
            model.baseline[it.key()] = it.value().get<double>();
          }
        }
        if (m.contains("noise_std")) {
          model.noise_std.clear();
          for (auto it = m.at("noise_std").begin(); it != m.at("noise_std").end(); ++it) {
            model.noise_std[it.key()] = it.value().get<double>();
          }
        }
      };
      const json& metrics = block.at("metrics");
      if (metrics.contains("active")) read_model(metrics.at("active"), spec.active_metrics);
      if (metrics.contains("passive")) read_model(metrics.at("passive"), spec.passive_metrics);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("scenario block: ") + e.what());
  }
  return spec;
}

std::vector<FaultSpec> faults_from_config(const json& config) {
  std::vector<FaultSpec> faults;
  if (!config.contains("faults")) return faults;
  try {
    for (const json& block : config.at("faults")) {
      FaultSpec fault;
      fault.root = block.at("root").get<std::string>();
      fault.start_s = block.value("start_s", 1.0);
      fault.lag_mean_s = block.value("lag_mean_s", 0.5);
      fault.lag_std_s = block.value("lag_std_s", 0.05);
      fault.probability = block.value("probability", 1.0);
      fault.field = block.value("field", std::string("cpu_fraction"));
      fault.delta = block.value("delta", 0.6);
      fault.affect_distributors = block.value("affect_distributors", true);
      fault.distributor_field = block.value("distributor_field", std::string("queue_depth"));
      fault.distributor_delta = block.value("distributor_delta", 50.0);
      faults.push_back(std::move(fault));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("faults block: ") + e.what());
  }
  return faults;
}

AnalyzeOptions analyze_options_from_config(const json& config) {
  AnalyzeOptions options;
  if (!config.contains("init")) {
    throw Error(ErrorCode::InvalidConfig, "config needs an \"init\" block");
  }
  try {
    const json& init = config.at("init");
    const std::string mode = init.at("mode").get<std::string>();
    const bool has_seeds = init.contains("seeds");
    const bool has_rule = init.contains("rule");
    if (mode == "seeds") {
      if (!has_seeds || has_rule) {
        throw Error(ErrorCode::InvalidConfig, "init mode \"seeds\" takes exactly a seed list");
      }
      options.init.mode = InitOptions::Mode::Seeds;
      for (const json& seed : init.at("seeds")) {
        options.init.seeds.push_back(seed.get<std::string>());
      }
    } else if (mode == "process-anomaly") {
      if (has_seeds) {
        throw Error(ErrorCode::InvalidConfig, "init modes are mutually exclusive");
      }
      options.init.mode = InitOptions::Mode::ProcessAnomaly;
      options.init.process_layer = init.value("layer", 1);
      options.init.anomaly_rule = init.value("rule", json{});
      if (init.contains("snapshot")) {
        const std::string path = init.at("snapshot").get<std::string>();
        if (!fs::exists(path)) {
          throw Error(ErrorCode::InvalidConfig, "process snapshot not found: " + path);
        }
        options.init.process_snapshot = load_process_snapshot(path);
      }
      if (init.contains("bindings")) {
        for (auto it = init.at("bindings").begin(); it != init.at("bindings").end(); ++it) {
          options.init.process_bindings[it.key()] = it.value().get<long long>();
        }
      }
    } else {
      throw Error(ErrorCode::InvalidConfig, "init mode must be seeds|process-anomaly");
    }

    options.plugin_configs = config.value("plugins", json::array());

    if (config.contains("detection")) {
      const json& detection = config.at("detection");
      options.detection.history_window = detection.value("history_window", std::size_t{32});
      options.detection.refractory_s = detection.value("refractory_s", 0.0);
    }
    if (config.contains("correlation")) {
      const json& correlation = config.at("correlation");
      const std::string methods = correlation.value("methods", std::string("both"));
      options.correlation.use_co_occurrence = methods == "both" || methods == "cooccurrence";
      options.correlation.use_time_lag = methods == "both" || methods == "timelag";
      if (!options.correlation.use_co_occurrence && !options.correlation.use_time_lag) {
        throw Error(ErrorCode::InvalidConfig, "methods must be cooccurrence|timelag|both");
      }
      options.correlation.icp.max_iters = correlation.value("max_iters", 32);
      options.correlation.icp.match_window_s = correlation.value("match_window_s", 1.0);
      options.correlation.icp.converge_eps_s = correlation.value("converge_eps_s", 1e-4);
      options.correlation.icp.max_offset_s = correlation.value("max_offset_s", 10.0);
      options.correlation.z_max = correlation.value("z_max", 3.0);
      options.correlation.max_lag_horizon_s = correlation.value("max_lag_horizon_s", 10.0);
    }
    if (config.contains("extraction")) {
      const json& extraction = config.at("extraction");
      const std::string trigger = extraction.value("trigger", std::string("demand"));
      if (trigger == "demand") {
        options.extraction.trigger = ExtractionOptions::Trigger::Demand;
      } else if (trigger == "quiescence") {
        options.extraction.trigger = ExtractionOptions::Trigger::Quiescence;
      } else {
        throw Error(ErrorCode::InvalidConfig, "trigger must be demand|quiescence");
      }
      options.extraction.quiescence_s = extraction.value("quiescence_s", 5.0);
      if (extraction.contains("initial")) {
        options.extraction.initial = extraction.at("initial").get<std::string>();
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  return options;
}

fs::path ensure_out_dir(const json& config, const std::string& out_flag) {
  fs::path dir = out_flag.empty() ? fs::path(config.value("out", std::string("out"))) : fs::path(out_flag);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  }
  return dir;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 std::optional<std::uint64_t> seed_flag) {
  const json config = load_config(config_path);
  ScenarioSpec spec = scenario_from_config(config);
  if (seed_flag) spec.seed = *seed_flag;
  const std::vector<FaultSpec> faults = faults_from_config(config);

  const SystemGraph graph = generate_topology(spec);
  const SimResult sim = run(graph, spec, faults);

  const fs::path dir = ensure_out_dir(config, out_flag);
  save_topology(dir / "topology.json", graph);
  write_file(dir / "events.jsonl", serialize_events(sim.events));
  write_file(dir / "ground_truth.json", dump_canonical(ground_truth_to_json(sim.truth)) + "\n");

  std::cout << "wrote " << (dir / "topology.json").string() << ", events.jsonl, ground_truth.json"
            << " (" << sim.events.size() << " events, " << sim.truth.onsets.size()
            << " affected members)\n";
  return kExitOk;
}

int cmd_analyze(const std::string& config_path, const std::string& topology_path,
                const std::string& events_path, const std::string& truth_path,
                const std::string& out_flag, const std::string& trigger_flag,
                const std::string& methods_flag) {
  const json config = load_config(config_path);
  AnalyzeOptions options = analyze_options_from_config(config);
  if (!trigger_flag.empty()) {
    options.extraction.trigger = trigger_flag == "quiescence"
                                     ? ExtractionOptions::Trigger::Quiescence
                                     : ExtractionOptions::Trigger::Demand;
  }
  if (!methods_flag.empty()) {
    options.correlation.use_co_occurrence =
        methods_flag == "both" || methods_flag == "cooccurrence";
    options.correlation.use_time_lag = methods_flag == "both" || methods_flag == "timelag";
  }

  const SystemGraph graph = load_topology(topology_path);
  const std::vector<EventRecord> events = load_events(events_path);

  const AnalyzeResult result = analyze_events(graph, events, options);

  json report = result.report;
  std::string score_line;
  if (!truth_path.empty()) {
    const GroundTruth truth =
        ground_truth_from_json(parse_json(read_file(truth_path), truth_path));
    bool hit = false;
    const std::size_t top = std::min<std::size_t>(3, result.ranked.size());
    for (std::size_t i = 0; i < top; ++i) {
      hit |= result.ranked[i].root_cause() == truth.root;
    }
    report["ground_truth"] = json{{"root", truth.root}, {"top3_hit", hit}};
    score_line = "ground truth root cause: " + truth.root + " -- in top-3: " +
                 (hit ? "yes" : "no") + "\n";
  }

  const fs::path dir = ensure_out_dir(config, out_flag);
  write_file(dir / "report.json", dump_canonical(report) + "\n");
  write_file(dir / "report.txt", result.report_text);
  write_file(dir / "state_dump.json", dump_canonical(state_to_json(result.snapshot)) + "\n");
  write_file(dir / "alerts.jsonl", result.store.serialize_jsonl());

  if (result.empty_seed_warning) {
    std::cerr << "warning: empty seed watchlist, pipeline was inert until expansion\n";
  }
  for (const PluginFailure& failure : result.failures) {
    std::cerr << "warning: plugin " << failure.plugin << " failed on " << failure.member << ": "
              << failure.message << "\n";
  }
  std::cout << result.report_text << score_line;
  return result.no_symptoms ? kExitNoSymptoms : kExitOk;
}

int cmd_inspect(const std::string& path) {
  const json doc = parse_json(read_file(path), path);
  if (doc.contains("schema") && doc.contains("members")) {
    const SystemGraph graph = topology_from_json(doc);
    std::size_t active = 0, passive = 0, processes = 0;
    for (const MemberId& id : graph.member_ids()) {
      if (is_process_member(id)) {
        ++processes;
      } else if (graph.kind(id) == MemberKind::Active) {
        ++active;
      } else {
        ++passive;
      }
    }
    std::cout << "members=" << active + passive << " (" << active << " active, " << passive
              << " passive)\n";
    if (processes > 0) std::cout << "process members=" << processes << "\n";
    const CommSubgraph comm = graph.comm_subgraph();
    std::cout << "layer 0: members=" << comm.members.size() << ", edges=" << comm.edges.size()
              << "\n";
    for (int layer = 1; layer < graph.layer_count(); ++layer) {
      std::cout << "layer " << layer << ": edges=" << graph.edge_count(layer) << "\n";
    }
    return kExitOk;
  }
  if (doc.contains("iteration") && doc.contains("watchlist")) {
    const SubgraphState state = state_from_json(doc);
    std::cout << "j=" << state.iteration << ", members=" << state.members.size()
              << ", edges=" << state.edges.size() << ", watchlist=" << state.watchlist.size()
              << "\n";
    for (const ExpansionEvent& event : state.history) {
      std::cout << "  iteration " << event.iteration << ": expanded on " << event.member << "\n";
    }
    return kExitOk;
  }
  throw Error(ErrorCode::ParseError, path + ": neither a topology nor a state dump");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digital-shadow fault diagnosis for pub/sub systems"};
  app.require_subcommand(1);

  std::string config_path, out_flag, trigger_flag, methods_flag;
  std::string topology_path, events_path, truth_path, inspect_path;
  std::optional<std::uint64_t> seed_flag;

  CLI::App* simulate = app.add_subcommand("simulate", "generate topology, event log, ground truth");
  simulate->add_option("--config", config_path, "run configuration (JSON)")->required();
  simulate->add_option("--seed", seed_flag, "override the scenario seed");
  simulate->add_option("--out", out_flag, "output directory");

  CLI::App* analyze = app.add_subcommand("analyze", "replay an event log and rank fault trajectories");
  analyze->add_option("--config", config_path, "run configuration (JSON)")->required();
  analyze->add_option("topology", topology_path, "topology file")->required();
  analyze->add_option("events", events_path, "event log (JSON Lines)")->required();
  analyze->add_option("--truth", truth_path, "ground-truth file; scores the ranked report");
  analyze->add_option("--out", out_flag, "output directory");
  analyze->add_option("--trigger", trigger_flag, "extraction trigger: demand|quiescence")
      ->check(CLI::IsMember({"demand", "quiescence"}));
  analyze->add_option("--methods", methods_flag, "correlation methods: cooccurrence|timelag|both")
      ->check(CLI::IsMember({"cooccurrence", "timelag", "both"}));

  CLI::App* inspect = app.add_subcommand("inspect", "summarize a topology or state dump");
  inspect->add_option("file", inspect_path, "topology or state-dump file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, out_flag, seed_flag);
    if (analyze->parsed()) {
      return cmd_analyze(config_path, topology_path, events_path, truth_path, out_flag,
                         trigger_flag, methods_flag);
    }
    return cmd_inspect(inspect_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
