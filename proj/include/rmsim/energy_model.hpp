#ifndef RMSIM_ENERGY_MODEL_HPP
#define RMSIM_ENERGY_MODEL_HPP

#include <cstdint>
#include <map>

#include "rmsim/perf_model.hpp"
#include "rmsim/platform.hpp"

namespace rmsim {

struct EnergyCurveEntry {
  double epi = 0.0;      // joules per instruction at (w, f_min)
  int f_min_index = 0;
};

/// Per-core EPI as a function of the way allocation, each entry pinned at
/// the minimum feasible frequency for that allocation. Ways with no feasible
/// frequency are absent.
struct EnergyCurve {
  int core_id = 0;
  std::map<int, EnergyCurveEntry> entries;
  std::uint64_t generation = 0;
};

/// Energy per instruction at (w, f): core dynamic energy scaled to f's
/// voltage, core static energy over the predicted interval time, and DRAM
/// access energy for misses plus write-backs.
double epi(const IntervalStats& stats, int w, int f_index,
           const VFTable& table, const EnergyCoefficients& coeff);

/// Prunes the (w, f) plane to the EPI-vs-ways curve: one entry per feasible
/// way count, evaluated at f_min(w).
EnergyCurve build_energy_curve(int core_id, const IntervalStats& stats,
                               const QosTarget& target, const VFTable& table,
                               const EnergyCoefficients& coeff,
                               const CacheGeometry& cache,
                               std::uint64_t generation = 0);

}  // namespace rmsim

#endif
