#include "shadowtrace/correlation.hpp"

#include <algorithm>
#include <cmath>

namespace shadowtrace {

const char* to_string(CorrelationMethod method) {
  return method == CorrelationMethod::CoOccurrence ? "cooccurrence" : "timelag";
}

AlertSeries make_series(const AlertStore& store, const MemberId& member,
                        const std::optional<std::string>& label,
                        std::optional<std::pair<double, double>> window) {
  return AlertSeries{member, store.series(member, label, window)};
}

namespace {

double median(std::vector<double> values) {
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Nearest element of sorted `sorted` to `target`; ties go to the earlier one.
double nearest(const std::vector<double>& sorted, double target) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), target);
  if (it == sorted.begin()) return *it;
  if (it == sorted.end()) return sorted.back();
  const double above = *it;
  const double below = *std::prev(it);
  return (target - below) <= (above - target) ? below : above;
}

}  // namespace

DependencyVerdict co_occurrence(const AlertSeries& a, const AlertSeries& b,
                                const IcpParams& params) {
  DependencyVerdict verdict;
  verdict.upstream = a.member;
  verdict.downstream = b.member;
  verdict.method = CorrelationMethod::CoOccurrence;
  if (a.timestamps.empty() || b.timestamps.empty()) {
    return verdict;
  }

  // Coarse alignment by median difference, then ICP refinement.
  double offset = median(b.timestamps) - median(a.timestamps);
  for (int iter = 0; iter < params.max_iters; ++iter) {
    std::vector<double> residuals;
    residuals.reserve(a.timestamps.size());
    for (double t : a.timestamps) {
      residuals.push_back(nearest(b.timestamps, t + offset) - (t + offset));
    }
    const double delta = median(std::move(residuals));
    offset += delta;
    if (std::abs(delta) < params.converge_eps_s) break;
  }

  std::size_t matched = 0;
  double residual_sq_sum = 0.0;
  for (double t : a.timestamps) {
    const double residual = nearest(b.timestamps, t + offset) - (t + offset);
    if (std::abs(residual) <= params.match_window_s) {
      ++matched;
      residual_sq_sum += residual * residual;
    }
  }
  const std::size_t denom = std::max(a.timestamps.size(), b.timestamps.size());
  const double fraction = static_cast<double>(matched) / static_cast<double>(denom);

  verdict.offset_or_lag = offset;
  verdict.dependent = fraction >= 0.5 && std::abs(offset) <= params.max_offset_s;
  if (verdict.dependent) {
    const double rms = std::sqrt(residual_sq_sum / static_cast<double>(matched));
    verdict.strength = std::clamp(fraction / (1.0 + rms), 0.0, 1.0);
  }
  return verdict;
}

std::vector<double> collect_lags(const std::vector<double>& u, const std::vector<double>& v,
                                 double horizon_s) {
  std::vector<double> lags;
  for (double t : u) {
    auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it == v.end()) continue;
    const double lag = *it - t;
    if (lag <= horizon_s) lags.push_back(lag);
  }
  return lags;
}

LagModel estimate_lag_model(const AlertStore& store,
                            const std::set<std::pair<MemberId, MemberId>>& pairs,
                            double max_lag_horizon_s) {
  std::vector<double> lags;
  for (const auto& [u, v] : pairs) {
    const std::vector<double> u_series = store.series(u);
    const std::vector<double> v_series = store.series(v);
    const std::vector<double> pair_lags = collect_lags(u_series, v_series, max_lag_horizon_s);
    lags.insert(lags.end(), pair_lags.begin(), pair_lags.end());
  }

  LagModel model;
  model.horizon_s = max_lag_horizon_s;
  model.count = lags.size();
  if (lags.empty()) return model;
  double sum = 0.0;
  for (double lag : lags) sum += lag;
  model.mean = sum / static_cast<double>(lags.size());
  double var = 0.0;
  for (double lag : lags) var += (lag - model.mean) * (lag - model.mean);
  model.stddev = std::sqrt(var / static_cast<double>(lags.size()));
  return model;
}

DependencyVerdict time_lag(const AlertSeries& u, const AlertSeries& v, const LagModel& model,
                           double z_max) {
  if (!model.usable()) {
    throw Error(ErrorCode::InsufficientData,
                "lag model has " + std::to_string(model.count) + " samples, need 3");
  }
  DependencyVerdict verdict;
  verdict.upstream = u.member;
  verdict.downstream = v.member;
  verdict.method = CorrelationMethod::TimeLag;

  const std::vector<double> lags = collect_lags(u.timestamps, v.timestamps, model.horizon_s);
  if (lags.empty()) {
    return verdict;
  }
  const double pair_lag = median(lags);
  const double deviation = std::abs(pair_lag - model.mean);
  const double scale = std::max(model.stddev, kLagStdFloorS);

  verdict.offset_or_lag = pair_lag;
  verdict.dependent = deviation <= z_max * scale;
  if (verdict.dependent) {
    verdict.strength = std::clamp(std::exp(-deviation / scale), 0.0, 1.0);
  }
  return verdict;
}

}  // namespace shadowtrace
