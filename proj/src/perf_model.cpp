#include "rmsim/perf_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rmsim {

MissCurve::MissCurve(int min_way, std::vector<double> misses)
    : min_way_(min_way), misses_(std::move(misses)) {
  if (min_way_ < 0) throw std::invalid_argument("miss_curve: negative way");
  for (std::size_t i = 0; i < misses_.size(); ++i) {
    if (misses_[i] < 0.0)
      throw std::invalid_argument("miss_curve: negative miss count");
    if (i > 0 && misses_[i] > misses_[i - 1] + 1e-9)
      throw std::invalid_argument(
          "miss_curve: miss counts must be non-increasing in ways");
  }
}

double MissCurve::at(int w) const {
  if (!contains(w))
    throw std::out_of_range("miss_curve: way count " + std::to_string(w) +
                            " outside [" + std::to_string(min_way()) + "," +
                            std::to_string(max_way()) + "]");
  return misses_[static_cast<std::size_t>(w - min_way_)];
}

void validate(const IntervalStats& stats) {
  if (stats.ic <= 0.0) throw std::invalid_argument("stats: ic must be > 0");
  if (stats.c_base < 0.0)
    throw std::invalid_argument("stats: c_base must be >= 0");
  if (stats.miss_curve.empty())
    throw std::invalid_argument("stats: miss_curve is empty");
  if (stats.mlp.empty())
    throw std::invalid_argument("stats: mlp_histogram is empty");
  double sum = 0.0;
  for (const auto& bin : stats.mlp) {
    if (bin.degree < 1)
      throw std::invalid_argument("stats: mlp_histogram degree must be >= 1");
    if (bin.probability < 0.0)
      throw std::invalid_argument(
          "stats: mlp_histogram probabilities must be >= 0");
    sum += bin.probability;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("stats: mlp_histogram must sum to 1");
  if (stats.writebacks < 0.0)
    throw std::invalid_argument("stats: writebacks must be >= 0");
  if (stats.mem_latency_s < 0.0)
    throw std::invalid_argument("stats: mem_latency must be >= 0");
  if (stats.core_dyn_energy_ref_j < 0.0)
    throw std::invalid_argument("stats: core_dyn_energy_ref must be >= 0");
}

double amat(const IntervalStats& stats) {
  if (stats.mlp.empty())
    throw std::invalid_argument("amat: empty MLP histogram");
  double overlap = 0.0;
  for (const auto& bin : stats.mlp)
    overlap += bin.probability / static_cast<double>(bin.degree);
  return stats.mem_latency_s * overlap;
}

double interval_time(const IntervalStats& stats, int w, double f_hz,
                     double amat_s) {
  return stats.c_base / f_hz + amat_s * stats.miss_curve.at(w);
}

double interval_time(const IntervalStats& stats, int w, double f_hz) {
  return interval_time(stats, w, f_hz, amat(stats));
}

double ips(const IntervalStats& stats, int w, double f_hz, double amat_s) {
  return stats.ic / interval_time(stats, w, f_hz, amat_s);
}

double ips(const IntervalStats& stats, int w, double f_hz) {
  return ips(stats, w, f_hz, amat(stats));
}

bool qos_ok(const IntervalStats& stats, const QosTarget& target, int w,
            int f_index, const VFTable& table) {
  const double amat_s = amat(stats);
  const double candidate = ips(stats, w, table.point(f_index).frequency_hz, amat_s);
  const double reference = ips(stats, target.baseline_ways,
                               table.point(target.baseline_vf).frequency_hz,
                               amat_s);
  return candidate >= reference * target.alpha;
}

std::optional<int> f_min(const IntervalStats& stats, const QosTarget& target,
                         int w, const VFTable& table) {
  if (!stats.miss_curve.contains(w)) return std::nullopt;
  const double amat_s = amat(stats);
  const double reference =
      ips(stats, target.baseline_ways,
          table.point(target.baseline_vf).frequency_hz, amat_s) *
      target.alpha;
  for (int f = 0; f < table.size(); ++f) {
    if (ips(stats, w, table.point(f).frequency_hz, amat_s) >= reference)
      return f;
  }
  return std::nullopt;
}

}  // namespace rmsim
