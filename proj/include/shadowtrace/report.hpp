// Analysis report: versioned JSON document plus a plain-text table.

#pragma once

#include "shadowtrace/trajectory.hpp"

namespace shadowtrace {

inline constexpr int kReportSchemaVersion = 1;

struct ReportInputs {
  bool no_symptoms = false;
  MemberId initial;
  std::vector<std::string> methods;
  std::optional<LagModel> lag_model;  // present when the time-lag method ran
  std::vector<FaultTrajectory> ranked;
  SubgraphState snapshot;
  std::size_t alert_count = 0;
};

json make_report(const ReportInputs& inputs);
std::string render_report_text(const json& report);

}  // namespace shadowtrace
