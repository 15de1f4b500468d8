#include "shadowtrace/plugins.hpp"

#include <algorithm>
#include <cmath>

namespace shadowtrace {

ThresholdPlugin::ThresholdPlugin(std::string name, Params params)
    : name_(std::move(name)), params_(std::move(params)) {
  if (params_.label.empty()) {
    params_.label = params_.field + (params_.above ? "-high" : "-low");
  }
  params_.severity = std::clamp(params_.severity, 0.0, 1.0);
}

std::optional<Symptom> ThresholdPlugin::evaluate(const MemberId&, const AttributeVector& attrs,
                                                 const AttributeHistory&) const {
  auto it = attrs.find(params_.field);
  if (it == attrs.end()) return std::nullopt;
  const bool fired = params_.above ? it->second > params_.threshold
                                   : it->second < params_.threshold;
  if (!fired) return std::nullopt;
  return Symptom{params_.label, params_.severity};
}

ZScorePlugin::ZScorePlugin(std::string name, Params params)
    : name_(std::move(name)), params_(std::move(params)) {
  if (params_.label.empty()) {
    params_.label = params_.field + "-spike";
  }
}

std::optional<Symptom> ZScorePlugin::evaluate(const MemberId&, const AttributeVector& attrs,
                                              const AttributeHistory& history) const {
  auto it = attrs.find(params_.field);
  if (it == attrs.end() || history.size() < params_.min_samples) return std::nullopt;

  double sum = 0.0;
  std::size_t n = 0;
  for (const AttributeVector& sample : history) {
    auto h = sample.find(params_.field);
    if (h == sample.end()) continue;
    sum += h->second;
    ++n;
  }
  if (n < params_.min_samples) return std::nullopt;
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (const AttributeVector& sample : history) {
    auto h = sample.find(params_.field);
    if (h == sample.end()) continue;
    var += (h->second - mean) * (h->second - mean);
  }
  var /= static_cast<double>(n);
  const double stddev = std::sqrt(var);
  if (stddev <= 0.0) {
    return std::nullopt;  // flat history; a step would divide by zero
  }
  const double z = std::abs(it->second - mean) / stddev;
  if (z <= params_.z_threshold) return std::nullopt;
  const double severity = std::clamp(z / (2.0 * params_.z_threshold), 0.0, 1.0);
  return Symptom{params_.label, severity};
}

std::shared_ptr<SymptomPlugin> make_plugin(const json& config) {
  try {
    const std::string type = config.at("type").get<std::string>();
    const std::string name = config.value("name", type);
    if (type == "threshold") {
      ThresholdPlugin::Params params;
      params.field = config.at("field").get<std::string>();
      params.threshold = config.at("threshold").get<double>();
      const std::string direction = config.value("direction", std::string("above"));
      if (direction != "above" && direction != "below") {
        throw Error(ErrorCode::InvalidConfig, "threshold direction must be above|below");
      }
      params.above = direction == "above";
      params.label = config.value("label", std::string{});
      params.severity = config.value("severity", 1.0);
      return std::make_shared<ThresholdPlugin>(name, params);
    }
    if (type == "zscore") {
      ZScorePlugin::Params params;
      params.field = config.at("field").get<std::string>();
      params.z_threshold = config.value("z_threshold", 3.0);
      params.min_samples = config.value("min_samples", std::size_t{8});
      params.label = config.value("label", std::string{});
      return std::make_shared<ZScorePlugin>(name, params);
    }
    throw Error(ErrorCode::InvalidConfig, "unknown plugin type: " + type);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("plugin config: ") + e.what());
  }
}

PluginRegistry registry_from_config(const json& plugin_array) {
  if (!plugin_array.is_array()) {
    throw Error(ErrorCode::InvalidConfig, "plugins must be a JSON array");
  }
  PluginRegistry registry;
  for (const json& block : plugin_array) {
    registry.register_plugin(make_plugin(block));
  }
  return registry;
}

}  // namespace shadowtrace
