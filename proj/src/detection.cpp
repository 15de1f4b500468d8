#include "shadowtrace/detection.hpp"

#include <algorithm>
#include <mutex>

namespace shadowtrace {

void PluginRegistry::register_plugin(std::shared_ptr<SymptomPlugin> plugin) {
  if (!names_.insert(plugin->name()).second) {
    throw Error(ErrorCode::DuplicatePluginName, plugin->name());
  }
  plugins_.push_back(std::move(plugin));
}

DetectionEngine::DetectionEngine(PluginRegistry registry, DetectionConfig config)
    : registry_(std::move(registry)), config_(config) {}

std::vector<Alert> DetectionEngine::evaluate_tick(const SystemGraph& graph,
                                                  const Watchlist& watchlist, double now) {
  failures_.clear();
  std::vector<Alert> alerts;
  for (const MemberId& member : watchlist) {
    if (!graph.has_member(member)) {
      throw Error(ErrorCode::UnknownMember, "watchlist entry " + member);
    }
    const AttributeVector attrs = graph.attributes(member);
    AttributeHistory& history = history_[member];

    for (const auto& plugin : registry_.plugins()) {
      std::optional<Symptom> symptom;
      try {
        symptom = plugin->evaluate(member, attrs, history);
      } catch (const std::exception& e) {
        failures_.push_back({plugin->name(), member, e.what()});
        continue;
      }
      if (!symptom) continue;
      const double severity = std::clamp(symptom->severity, 0.0, 1.0);

      const auto key = std::make_pair(member, symptom->label);
      auto last = last_emitted_.find(key);
      if (last != last_emitted_.end() && now - last->second < config_.refractory_s) {
        continue;  // inside the refractory window of the previous emission
      }
      last_emitted_[key] = now;
      alerts.push_back(Alert{member, now, symptom->label, severity});
    }

    history.push_back(attrs);
    while (history.size() > config_.history_window) history.pop_front();
  }
  return alerts;
}

AlertStore::AlertStore(const AlertStore& other) {
  std::shared_lock lock(other.mutex_);
  log_ = other.log_;
  by_member_ = other.by_member_;
}

AlertStore& AlertStore::operator=(const AlertStore& other) {
  if (this == &other) return *this;
  AlertStore copy(other);
  std::unique_lock lock(mutex_);
  log_ = std::move(copy.log_);
  by_member_ = std::move(copy.by_member_);
  return *this;
}

void AlertStore::record(const Alert& alert) {
  std::unique_lock lock(mutex_);
  const std::size_t index = log_.size();
  log_.push_back(alert);
  std::vector<std::size_t>& slots = by_member_[alert.origin];
  // Keep the member's index timestamp-sorted even for out-of-order appends.
  auto pos = std::upper_bound(slots.begin(), slots.end(), alert.timestamp,
                              [&](double t, std::size_t i) { return t < log_[i].timestamp; });
  slots.insert(pos, index);
}

std::size_t AlertStore::size() const {
  std::shared_lock lock(mutex_);
  return log_.size();
}

std::vector<Alert> AlertStore::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

std::vector<double> AlertStore::series(const MemberId& member,
                                       const std::optional<std::string>& label,
                                       std::optional<std::pair<double, double>> window) const {
  std::shared_lock lock(mutex_);
  std::vector<double> out;
  auto it = by_member_.find(member);
  if (it == by_member_.end()) return out;
  for (std::size_t index : it->second) {
    const Alert& alert = log_[index];
    if (label && alert.label != *label) continue;
    if (window && (alert.timestamp < window->first || alert.timestamp > window->second)) continue;
    out.push_back(alert.timestamp);
  }
  return out;
}

std::vector<Alert> AlertStore::alerts_for(const MemberId& member) const {
  std::shared_lock lock(mutex_);
  std::vector<Alert> out;
  auto it = by_member_.find(member);
  if (it == by_member_.end()) return out;
  for (std::size_t index : it->second) out.push_back(log_[index]);
  return out;
}

std::set<MemberId> AlertStore::origins() const {
  std::shared_lock lock(mutex_);
  std::set<MemberId> out;
  for (const auto& [member, slots] : by_member_) {
    if (!slots.empty()) out.insert(member);
  }
  return out;
}

std::string AlertStore::serialize_jsonl() const {
  std::shared_lock lock(mutex_);
  std::vector<json> lines;
  for (const Alert& alert : log_) {
    json doc = json::object();
    doc["timestamp"] = alert.timestamp;
    doc["origin"] = alert.origin;
    doc["label"] = alert.label;
    doc["severity"] = alert.severity;
    lines.push_back(std::move(doc));
  }
  return dump_canonical_lines(lines);
}

AlertStore AlertStore::from_jsonl(const std::string& text, const std::string& context) {
  AlertStore store;
  for (const json& doc : parse_json_lines(text, context)) {
    try {
      store.record(Alert{doc.at("origin").get<std::string>(), doc.at("timestamp").get<double>(),
                         doc.at("label").get<std::string>(), doc.at("severity").get<double>()});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, context + ": " + e.what());
    }
  }
  return store;
}

}  // namespace shadowtrace
