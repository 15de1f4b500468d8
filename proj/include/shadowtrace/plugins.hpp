// Reference symptom plugins and the JSON plugin-config factory, so the
// pipeline runs without external expert code. A plugin only looks at the
// watched member's own attributes; a member that does not carry the
// configured field simply never matches.

#pragma once

#include <functional>

#include "shadowtrace/canonical_json.hpp"
#include "shadowtrace/detection.hpp"

namespace shadowtrace {

// Fires while `field` is above (or below) a static threshold.
class ThresholdPlugin : public SymptomPlugin {
 public:
  struct Params {
    std::string field;
    double threshold = 0.0;
    bool above = true;
    std::string label;  // defaults to "<field>-high" / "<field>-low"
    double severity = 1.0;
  };

  ThresholdPlugin(std::string name, Params params);

  const std::string& name() const override { return name_; }
  std::optional<Symptom> evaluate(const MemberId& member, const AttributeVector& attrs,
                                  const AttributeHistory& history) const override;

 private:
  std::string name_;
  Params params_;
};

// Fires when `field` deviates from its history mean by more than z_threshold
// standard deviations. Needs min_samples of history before it can judge.
class ZScorePlugin : public SymptomPlugin {
 public:
  struct Params {
    std::string field;
    double z_threshold = 3.0;
    std::size_t min_samples = 8;
    std::string label;  // defaults to "<field>-spike"
  };

  ZScorePlugin(std::string name, Params params);

  const std::string& name() const override { return name_; }
  std::optional<Symptom> evaluate(const MemberId& member, const AttributeVector& attrs,
                                  const AttributeHistory& history) const override;

 private:
  std::string name_;
  Params params_;
};

// Wraps an arbitrary callable; used for config-free rules in tests and for
// the process-anomaly watchlist initialization.
class CallbackPlugin : public SymptomPlugin {
 public:
  using Fn = std::function<std::optional<Symptom>(const MemberId&, const AttributeVector&,
                                                  const AttributeHistory&)>;

  CallbackPlugin(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  const std::string& name() const override { return name_; }
  std::optional<Symptom> evaluate(const MemberId& member, const AttributeVector& attrs,
                                  const AttributeHistory& history) const override {
    return fn_(member, attrs, history);
  }

 private:
  std::string name_;
  Fn fn_;
};

// Config block: {"type": "threshold"|"zscore", "name": ..., "field": ...,
// plus per-type parameters ("threshold", "direction", "severity",
// "z_threshold", "min_samples", "label").
std::shared_ptr<SymptomPlugin> make_plugin(const json& config);

PluginRegistry registry_from_config(const json& plugin_array);

}  // namespace shadowtrace
