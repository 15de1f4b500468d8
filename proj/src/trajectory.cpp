#include "shadowtrace/trajectory.hpp"

#include <algorithm>

namespace shadowtrace {

namespace {

struct PairJudgement {
  bool dependent = false;
  double strength = 0.0;
  std::map<std::string, double> methods;
};

class Tracer {
 public:
  Tracer(const SubgraphState& snapshot, const AlertStore& store, const TraceParams& params)
      : store_(store), params_(params) {
    for (const auto& [src, dst] : snapshot.edges) {
      predecessors_[dst].insert(src);
    }
  }

  const AlertSeries& series(const MemberId& member) {
    auto it = series_cache_.find(member);
    if (it == series_cache_.end()) {
      it = series_cache_.emplace(member, make_series(store_, member)).first;
    }
    return it->second;
  }

  const PairJudgement& judge(const MemberId& upstream, const MemberId& downstream) {
    const auto key = std::make_pair(upstream, downstream);
    auto it = judgement_cache_.find(key);
    if (it != judgement_cache_.end()) return it->second;

    PairJudgement judgement;
    if (params_.use_co_occurrence) {
      const DependencyVerdict v = co_occurrence(series(upstream), series(downstream), params_.icp);
      if (v.dependent) {
        judgement.dependent = true;
        judgement.strength = std::max(judgement.strength, v.strength);
        judgement.methods[to_string(v.method)] = v.strength;
      }
    }
    if (params_.use_time_lag) {
      const DependencyVerdict v =
          time_lag(series(upstream), series(downstream), params_.lag_model, params_.z_max);
      if (v.dependent) {
        judgement.dependent = true;
        judgement.strength = std::max(judgement.strength, v.strength);
        judgement.methods[to_string(v.method)] = v.strength;
      }
    }
    return judgement_cache_.emplace(key, std::move(judgement)).first->second;
  }

  void walk(const MemberId& current) {
    if (out_.size() >= params_.max_trajectories) return;

    std::vector<std::pair<MemberId, const PairJudgement*>> extendable;
    auto preds = predecessors_.find(current);
    if (preds != predecessors_.end()) {
      for (const MemberId& p : preds->second) {
        if (on_path_.contains(p)) continue;  // cycle break
        if (series(p).timestamps.empty()) continue;
        const PairJudgement& judgement = judge(p, current);
        if (judgement.dependent) extendable.emplace_back(p, &judgement);
      }
    }

    if (extendable.empty()) {
      emit();
      return;
    }
    for (const auto& [p, judgement] : extendable) {
      if (out_.size() >= params_.max_trajectories) return;
      path_.push_back(p);
      on_path_.insert(p);
      strengths_.push_back(judgement->strength);
      methods_.push_back(judgement->methods);
      walk(p);
      methods_.pop_back();
      strengths_.pop_back();
      on_path_.erase(p);
      path_.pop_back();
    }
  }

  std::vector<FaultTrajectory> run(const MemberId& initial) {
    path_ = {initial};
    on_path_ = {initial};
    walk(initial);
    return std::move(out_);
  }

 private:
  void emit() {
    FaultTrajectory trajectory;
    trajectory.members = path_;
    trajectory.strengths = strengths_;
    trajectory.hop_methods = methods_;
    if (!strengths_.empty()) {
      double sum = 0.0;
      for (double s : strengths_) sum += s;
      trajectory.avg_strength = sum / static_cast<double>(strengths_.size());
    }
    out_.push_back(std::move(trajectory));
  }

  const AlertStore& store_;
  const TraceParams& params_;
  std::map<MemberId, std::set<MemberId>> predecessors_;
  std::map<MemberId, AlertSeries> series_cache_;
  std::map<std::pair<MemberId, MemberId>, PairJudgement> judgement_cache_;

  std::vector<MemberId> path_;
  std::set<MemberId> on_path_;
  std::vector<double> strengths_;
  std::vector<std::map<std::string, double>> methods_;
  std::vector<FaultTrajectory> out_;
};

}  // namespace

std::vector<FaultTrajectory> trace(const SubgraphState& snapshot, const AlertStore& store,
                                   const MemberId& initial, const TraceParams& params) {
  if (!snapshot.members.contains(initial)) {
    throw Error(ErrorCode::NotInSubgraph, initial);
  }
  if (store.series(initial).empty()) {
    throw Error(ErrorCode::NoAlerts, initial);
  }
  if (params.use_time_lag && !params.lag_model.usable()) {
    throw Error(ErrorCode::InsufficientData, "time-lag method enabled with unusable lag model");
  }
  Tracer tracer(snapshot, store, params);
  return tracer.run(initial);
}

std::vector<FaultTrajectory> rank(std::vector<FaultTrajectory> trajectories) {
  std::sort(trajectories.begin(), trajectories.end(),
            [](const FaultTrajectory& a, const FaultTrajectory& b) {
              if (a.avg_strength != b.avg_strength) return a.avg_strength > b.avg_strength;
              if (a.length() != b.length()) return a.length() > b.length();
              return a.members < b.members;
            });
  return trajectories;
}

}  // namespace shadowtrace
