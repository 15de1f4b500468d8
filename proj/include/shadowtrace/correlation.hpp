// Symptom correlation between per-member alert time series.
//
// Co-occurrence aligns two series with an iterative-closest-point scheme in
// one dimension: each timestamp of `a` is matched to the nearest timestamp
// of `b` under the current offset, and the offset moves by the median of the
// matched signed differences until it converges. The pair counts as
// dependent when at least half of the points match within the window at a
// plausible offset.
//
// Time-lag analysis compares a pair's median first-response lag against an
// empirical lag distribution estimated from the run's own alerts.

#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "shadowtrace/detection.hpp"

namespace shadowtrace {

struct AlertSeries {
  MemberId member;
  std::vector<double> timestamps;  // ascending
};

AlertSeries make_series(const AlertStore& store, const MemberId& member,
                        const std::optional<std::string>& label = std::nullopt,
                        std::optional<std::pair<double, double>> window = std::nullopt);

enum class CorrelationMethod { CoOccurrence, TimeLag };

const char* to_string(CorrelationMethod method);

struct DependencyVerdict {
  MemberId upstream;
  MemberId downstream;
  CorrelationMethod method = CorrelationMethod::CoOccurrence;
  bool dependent = false;
  double strength = 0.0;       // [0, 1]; zero whenever dependent is false
  double offset_or_lag = 0.0;  // recovered alignment offset, or median lag
};

struct IcpParams {
  int max_iters = 32;
  double match_window_s = 1.0;
  double converge_eps_s = 1e-4;
  // Alignments beyond this are not co-occurrence no matter how well the
  // shapes line up.
  double max_offset_s = 10.0;
};

// strength = matched_fraction / (1 + rms residual). Identical series align
// at offset 0 with strength exactly 1. Degenerate inputs (either series
// empty) come back dependent=false.
DependencyVerdict co_occurrence(const AlertSeries& a, const AlertSeries& b,
                                const IcpParams& params = {});

// Floor for the lag-model standard deviation; keeps constant-lag models from
// dividing by zero.
inline constexpr double kLagStdFloorS = 0.01;

struct LagModel {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
  double horizon_s = 10.0;

  bool usable() const { return count >= 3; }
};

// For every alert of `u` at time t, the lag to the first `v` alert at or
// after t, capped at the horizon.
std::vector<double> collect_lags(const std::vector<double>& u, const std::vector<double>& v,
                                 double horizon_s);

// Pools the lags of all pairs into one empirical distribution. A model with
// fewer than 3 samples is marked unusable rather than thrown.
LagModel estimate_lag_model(const AlertStore& store,
                            const std::set<std::pair<MemberId, MemberId>>& pairs,
                            double max_lag_horizon_s = 10.0);

// Throws InsufficientData when the model is unusable. A pair with no lag
// samples inside the horizon is simply not dependent.
DependencyVerdict time_lag(const AlertSeries& u, const AlertSeries& v, const LagModel& model,
                           double z_max = 3.0);

}  // namespace shadowtrace
