#ifndef RMSIM_PERF_MODEL_HPP
#define RMSIM_PERF_MODEL_HPP

#include <map>
#include <optional>
#include <vector>

#include "rmsim/platform.hpp"

namespace rmsim {

/// LLC miss counts over a contiguous range of way allocations, as an ATD
/// would report them. Non-increasing in the way count.
class MissCurve {
public:
  MissCurve() = default;
  MissCurve(int min_way, std::vector<double> misses);

  int min_way() const { return min_way_; }
  int max_way() const { return min_way_ + static_cast<int>(misses_.size()) - 1; }
  bool contains(int w) const { return w >= min_way() && w <= max_way(); }
  double at(int w) const;
  bool empty() const { return misses_.empty(); }
  const std::vector<double>& values() const { return misses_; }

private:
  int min_way_ = 0;
  std::vector<double> misses_;
};

/// P_ov(i): probability of i overlapping outstanding misses, i >= 1.
struct MlpBin {
  int degree = 1;
  double probability = 0.0;
};

using MlpHistogram = std::vector<MlpBin>;

/// Per-interval statistics collected from performance counters and the ATD.
struct IntervalStats {
  double ic = 0.0;      // instructions per interval
  double c_base = 0.0;  // compute cycles, memory stalls excluded
  MissCurve miss_curve;
  MlpHistogram mlp;
  double writebacks = 0.0;
  double mem_latency_s = 0.0;           // isolated DRAM access latency
  double core_dyn_energy_ref_j = 0.0;   // measured at the reference VF point
};

/// Throws std::invalid_argument naming the offending field.
void validate(const IntervalStats& stats);

struct QosTarget {
  double alpha = 1.0;
  int baseline_ways = 0;  // w_b
  int baseline_vf = 0;    // f_b index
};

/// Average memory access time after MLP correction: ML * sum_i P(i)/i.
double amat(const IntervalStats& stats);

/// Time to run the interval: C_base/f + AMAT * M(w).
double interval_time(const IntervalStats& stats, int w, double f_hz,
                     double amat_s);
double interval_time(const IntervalStats& stats, int w, double f_hz);

/// Instructions per second at allocation w and frequency f.
double ips(const IntervalStats& stats, int w, double f_hz, double amat_s);
double ips(const IntervalStats& stats, int w, double f_hz);

/// IPS(w, f) >= IPS(w_b, f_b) * alpha, both sides from the same stats.
bool qos_ok(const IntervalStats& stats, const QosTarget& target, int w,
            int f_index, const VFTable& table);

/// Smallest VF index meeting QoS at allocation w, or nullopt when even the
/// highest frequency cannot compensate the misses.
std::optional<int> f_min(const IntervalStats& stats, const QosTarget& target,
                         int w, const VFTable& table);

}  // namespace rmsim

#endif
