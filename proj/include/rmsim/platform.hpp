#ifndef RMSIM_PLATFORM_HPP
#define RMSIM_PLATFORM_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace rmsim {

/// One voltage/frequency operating point of a core.
struct VFPoint {
  int index = 0;
  double frequency_hz = 0.0;
  double voltage_v = 0.0;
  double static_power_w = 0.0;
};

/// Ordered table of operating points. Frequency and voltage must strictly
/// increase with the index; one point is designated as the baseline setting.
class VFTable {
public:
  VFTable() = default;
  VFTable(std::vector<VFPoint> points, int baseline_index);

  int size() const { return static_cast<int>(points_.size()); }
  const VFPoint& point(int index) const;
  const VFPoint& baseline() const { return point(baseline_index_); }
  int baseline_index() const { return baseline_index_; }
  void set_baseline_index(int index);
  const std::vector<VFPoint>& points() const { return points_; }
  int max_index() const { return size() - 1; }

private:
  std::vector<VFPoint> points_;
  int baseline_index_ = 0;
};

/// The stock 10-point table: 1.00..3.25 GHz in 0.25 GHz steps, 0.80..1.25 V
/// in 0.05 V steps, baseline at index 4 (2 GHz, 1 V). Static power defaults
/// to static_power_per_volt * voltage.
VFTable default_vf_table(double static_power_per_volt = 1.0);

double static_power(const VFTable& table, int index);

/// Dynamic energy measured at one operating point, rescaled to another by
/// the square of the voltage ratio.
double scale_dynamic_energy(double e_ref_j, const VFTable& table, int from,
                            int to);

/// Shared-LLC way partitioning limits. Baseline evenly splits all ways.
struct CacheGeometry {
  int total_ways = 0;              // A
  int ways_per_core_baseline = 0;  // w_b
  std::size_t way_bytes = 0;
  int min_ways_per_core = 2;
  int max_ways_per_core = 0;  // W_max
};

/// Builds and validates a geometry for num_cores cores. max_ways_per_core 0
/// selects the loosest bound, total_ways - 2*(num_cores-1).
CacheGeometry make_cache_geometry(int total_ways, std::size_t way_bytes,
                                  int num_cores, int max_ways_per_core = 0);

struct EnergyCoefficients {
  double dram_energy_per_access_j = 20e-9;
  double shared_static_power_w = 0.5;  // LLC + interconnect
  int reference_vf_index = 4;          // VF point of stored dynamic energies
};

struct OverheadSpec {
  double rma_instructions = 40000;
  double dvfs_switch_time_s = 15e-6;
  double dvfs_switch_energy_j = 3e-6;
  double repartition_extra_mpki = 0.0;
};

/// Immutable machine model shared by the models, the allocator and the
/// simulator.
struct Platform {
  VFTable vf;
  CacheGeometry cache;
  EnergyCoefficients energy;
  OverheadSpec overheads;
  int num_cores = 0;
};

Platform default_platform(int num_cores = 4);
void validate(const Platform& platform);

/// Platform config file round trip. The file does not fix the core count;
/// the caller resolves it (normally from the workload).
Platform platform_from_json(const std::string& text, int num_cores);
std::string platform_to_json(const Platform& platform);
Platform load_platform(const std::filesystem::path& path, int num_cores);
void save_platform(const Platform& platform,
                   const std::filesystem::path& path);

/// Instruction quota used in the original experiments (4146B instructions).
inline constexpr double kFullStudyQuotaInstructions = 4146e9;

}  // namespace rmsim

#endif
