#include "shadowtrace/report.hpp"

#include <cstdio>
#include <sstream>

namespace shadowtrace {

json make_report(const ReportInputs& inputs) {
  json doc = json::object();
  doc["schema_version"] = kReportSchemaVersion;
  doc["no_symptoms"] = inputs.no_symptoms;
  if (inputs.no_symptoms) {
    doc["message"] = "no symptoms detected";
    doc["trajectories"] = json::array();
    return doc;
  }
  doc["initial"] = inputs.initial;
  doc["methods"] = inputs.methods;
  doc["alert_count"] = inputs.alert_count;
  if (inputs.lag_model) {
    json model = json::object();
    model["mean"] = inputs.lag_model->mean;
    model["stddev"] = inputs.lag_model->stddev;
    model["count"] = inputs.lag_model->count;
    model["horizon_s"] = inputs.lag_model->horizon_s;
    doc["lag_model"] = std::move(model);
  } else {
    doc["lag_model"] = nullptr;
  }

  json snapshot = json::object();
  snapshot["iteration"] = inputs.snapshot.iteration;
  snapshot["members"] = inputs.snapshot.members.size();
  snapshot["edges"] = inputs.snapshot.edges.size();
  snapshot["watchlist"] = inputs.snapshot.watchlist.size();
  doc["snapshot"] = std::move(snapshot);

  json trajectories = json::array();
  for (const FaultTrajectory& trajectory : inputs.ranked) {
    json entry = json::object();
    entry["members"] = trajectory.members;
    entry["strengths"] = trajectory.strengths;
    entry["avg_strength"] = trajectory.avg_strength;
    entry["length"] = trajectory.length();
    entry["root_cause"] = trajectory.root_cause();
    json hops = json::array();
    for (std::size_t i = 0; i < trajectory.strengths.size(); ++i) {
      json hop = json::object();
      hop["downstream"] = trajectory.members[i];
      hop["upstream"] = trajectory.members[i + 1];
      hop["strength"] = trajectory.strengths[i];
      hop["methods"] = trajectory.hop_methods[i];
      hops.push_back(std::move(hop));
    }
    entry["hops"] = std::move(hops);
    trajectories.push_back(std::move(entry));
  }
  doc["trajectories"] = std::move(trajectories);
  return doc;
}

std::string render_report_text(const json& report) {
  std::ostringstream out;
  if (report.value("no_symptoms", false)) {
    out << "no symptoms detected\n";
    return out.str();
  }
  out << "initial symptom: " << report.at("initial").get<std::string>() << "\n";
  const json& snapshot = report.at("snapshot");
  out << "subgraph: iteration=" << snapshot.at("iteration").get<std::uint64_t>()
      << ", members=" << snapshot.at("members").get<std::size_t>()
      << ", edges=" << snapshot.at("edges").get<std::size_t>()
      << ", watchlist=" << snapshot.at("watchlist").get<std::size_t>() << "\n";
  out << "\n";
  out << "rank  avg_strength  length  trajectory (initial -> root cause)\n";
  out << "----  ------------  ------  ----------------------------------\n";
  int position = 1;
  for (const json& entry : report.at("trajectories")) {
    char strength[16];
    std::snprintf(strength, sizeof(strength), "%.4f", entry.at("avg_strength").get<double>());
    out << position++ << "     " << strength << "        " << entry.at("length").get<std::size_t>()
        << "       ";
    bool first = true;
    for (const json& member : entry.at("members")) {
      if (!first) out << " -> ";
      first = false;
      out << member.get<std::string>();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace shadowtrace
