// Plugin-driven symptom detection over the watchlist, feeding an append-only
// alert store. Plugins see a watched member's current attributes plus a
// bounded history of its previous samples; members outside the watchlist are
// never evaluated. A plugin that throws is skipped and reported, the rest of
// the tick proceeds.

#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "shadowtrace/canonical_json.hpp"
#include "shadowtrace/graph.hpp"

namespace shadowtrace {

struct Symptom {
  std::string label;
  double severity = 1.0;  // [0, 1]
};

struct Alert {
  MemberId origin;
  double timestamp = 0.0;  // scenario seconds
  std::string label;
  double severity = 1.0;

  auto operator<=>(const Alert&) const = default;
};

using Watchlist = std::set<MemberId>;
using AttributeHistory = std::deque<AttributeVector>;  // oldest first, current excluded

class SymptomPlugin {
 public:
  virtual ~SymptomPlugin() = default;
  virtual const std::string& name() const = 0;

  // Must be deterministic for identical inputs and must not mutate them.
  virtual std::optional<Symptom> evaluate(const MemberId& member, const AttributeVector& attrs,
                                          const AttributeHistory& history) const = 0;
};

class PluginRegistry {
 public:
  // Plugins run in registration order; names are unique.
  void register_plugin(std::shared_ptr<SymptomPlugin> plugin);
  const std::vector<std::shared_ptr<SymptomPlugin>>& plugins() const { return plugins_; }
  std::size_t size() const { return plugins_.size(); }

 private:
  std::vector<std::shared_ptr<SymptomPlugin>> plugins_;
  std::set<std::string> names_;
};

struct PluginFailure {
  std::string plugin;
  MemberId member;
  std::string message;
};

struct DetectionConfig {
  std::size_t history_window = 32;
  // Identical (origin, label) alerts closer together than this collapse into
  // the first one. The pipeline defaults it to one tick.
  double refractory_s = 0.0;
};

// Owns the per-member history and dedup state accumulated across ticks.
class DetectionEngine {
 public:
  DetectionEngine(PluginRegistry registry, DetectionConfig config = {});

  // Runs every registered plugin over every watched member (id order) and
  // returns the alerts stamped `now`. Plugin failures in this tick are
  // available from failures() until the next call.
  std::vector<Alert> evaluate_tick(const SystemGraph& graph, const Watchlist& watchlist,
                                   double now);

  const std::vector<PluginFailure>& failures() const { return failures_; }
  const PluginRegistry& registry() const { return registry_; }

 private:
  PluginRegistry registry_;
  DetectionConfig config_;
  std::map<MemberId, AttributeHistory> history_;
  std::map<std::pair<MemberId, std::string>, double> last_emitted_;
  std::vector<PluginFailure> failures_;
};

// Append-only alert database with per-member, per-label time-sorted indexes.
// One writer may append while readers iterate; reads see a prefix-consistent
// view.
class AlertStore {
 public:
  AlertStore() = default;
  AlertStore(const AlertStore& other);
  AlertStore& operator=(const AlertStore& other);

  void record(const Alert& alert);

  std::size_t size() const;
  std::vector<Alert> log() const;  // append order

  // Timestamp-sorted alert times for one member, optionally filtered by
  // label and/or closed window [t0, t1].
  std::vector<double> series(const MemberId& member,
                             const std::optional<std::string>& label = std::nullopt,
                             std::optional<std::pair<double, double>> window = std::nullopt) const;

  std::vector<Alert> alerts_for(const MemberId& member) const;  // timestamp-sorted
  std::set<MemberId> origins() const;

  std::string serialize_jsonl() const;
  static AlertStore from_jsonl(const std::string& text, const std::string& context);

 private:
  mutable std::shared_mutex mutex_;
  std::vector<Alert> log_;
  std::map<MemberId, std::vector<std::size_t>> by_member_;  // timestamp-sorted indexes
};

}  // namespace shadowtrace
