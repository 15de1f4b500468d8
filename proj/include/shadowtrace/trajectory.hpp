// Fault trajectories: ordered member chains from the initially detected
// symptom back to a root-cause candidate, built by walking the frozen
// subgraph's edges upstream. An edge (p -> current) extends a trajectory
// when p has alerts and at least one enabled correlation method finds the
// pair dependent; a member with no such predecessor ends the chain as the
// root-cause candidate.

#pragma once

#include <map>

#include "shadowtrace/correlation.hpp"
#include "shadowtrace/subgraph.hpp"

namespace shadowtrace {

struct FaultTrajectory {
  std::vector<MemberId> members;   // [initial, ..., root-cause candidate]
  std::vector<double> strengths;   // per hop, [0, 1]
  // Per hop: method name -> strength, for the methods that judged the pair
  // dependent.
  std::vector<std::map<std::string, double>> hop_methods;
  double avg_strength = 0.0;       // 0 for the degenerate single-member chain

  std::size_t length() const { return strengths.size(); }
  const MemberId& root_cause() const { return members.back(); }

  bool operator==(const FaultTrajectory&) const = default;
};

struct TraceParams {
  bool use_co_occurrence = true;
  bool use_time_lag = false;
  IcpParams icp;
  LagModel lag_model;  // must be usable when use_time_lag is set
  double z_max = 3.0;
  // Safety valve against path explosions in dense graphs; generous for desk
  // scale.
  std::size_t max_trajectories = 4096;
};

// Hop strength is the max over the methods that said dependent. Cycles are
// broken by never revisiting a member within one trajectory. Trajectories
// come back in deterministic depth-first order.
std::vector<FaultTrajectory> trace(const SubgraphState& snapshot, const AlertStore& store,
                                   const MemberId& initial, const TraceParams& params = {});

// Average strength descending, then length descending, then lexicographic
// member sequence: a deterministic total order.
std::vector<FaultTrajectory> rank(std::vector<FaultTrajectory> trajectories);

}  // namespace shadowtrace
