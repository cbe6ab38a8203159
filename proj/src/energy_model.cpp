#include "rmsim/energy_model.hpp"

namespace rmsim {

double epi(const IntervalStats& stats, int w, int f_index,
           const VFTable& table, const EnergyCoefficients& coeff) {
  const double t = interval_time(stats, w, table.point(f_index).frequency_hz);
  const double e_dyn = scale_dynamic_energy(stats.core_dyn_energy_ref_j, table,
                                            coeff.reference_vf_index, f_index);
  const double e_static = table.point(f_index).static_power_w * t;
  const double e_mem = (stats.miss_curve.at(w) + stats.writebacks) *
                       coeff.dram_energy_per_access_j;
  return (e_dyn + e_static + e_mem) / stats.ic;
}

EnergyCurve build_energy_curve(int core_id, const IntervalStats& stats,
                               const QosTarget& target, const VFTable& table,
                               const EnergyCoefficients& coeff,
                               const CacheGeometry& cache,
                               std::uint64_t generation) {
  EnergyCurve curve;
  curve.core_id = core_id;
  curve.generation = generation;
  for (int w = cache.min_ways_per_core; w <= cache.max_ways_per_core; ++w) {
    if (!stats.miss_curve.contains(w)) continue;
    if (auto f = f_min(stats, target, w, table)) {
      curve.entries[w] = {epi(stats, w, *f, table, coeff), *f};
    }
  }
  return curve;
}

}  // namespace rmsim
