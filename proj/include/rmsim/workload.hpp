#ifndef RMSIM_WORKLOAD_HPP
#define RMSIM_WORKLOAD_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rmsim/perf_model.hpp"
#include "rmsim/platform.hpp"
#include "rmsim/rng.hpp"

namespace rmsim {

/// Measured execution of one interval at a specific (w, f) setting.
struct TruthEntry {
  double time_s = 0.0;
  double core_energy_j = 0.0;  // dynamic + static, no DRAM
  double mem_accesses = 0.0;
};

/// Dense (way x VF) grid of ground-truth measurements for one phase.
class TruthTable {
public:
  TruthTable() = default;
  TruthTable(int min_way, int num_ways, int num_vf);

  bool covers(int w, int f_index) const;
  const TruthEntry& at(int w, int f_index) const;
  TruthEntry& at(int w, int f_index);
  int min_way() const { return min_way_; }
  int max_way() const { return min_way_ + num_ways_ - 1; }
  int num_vf() const { return num_vf_; }

private:
  int min_way_ = 0;
  int num_ways_ = 0;
  int num_vf_ = 0;
  std::vector<TruthEntry> cells_;
};

/// One SimPoint-style phase: representative interval statistics, the phase
/// weight, and (in noisy mode) the measured ground truth per setting.
struct PhaseRecord {
  int phase_id = 0;
  double weight = 0.0;
  IntervalStats stats;
  std::optional<TruthTable> truth;
};

struct AppProfile {
  std::string name;
  double interval_ic = 0.0;
  std::vector<PhaseRecord> phases;
  std::vector<int> trace;  // phase id per interval

  double total_instructions() const {
    return interval_ic * static_cast<double>(trace.size());
  }
  const PhaseRecord& phase(int phase_id) const;
};

void validate(const AppProfile& app);

/// Ground truth for one setting: the stored table when present, otherwise
/// the analytical models evaluated on the phase stats (perfect-model mode).
TruthEntry truth_entry(const PhaseRecord& phase, const VFTable& table,
                       const EnergyCoefficients& coeff, int w, int f_index);

/// Interval statistics as performance counters would report them when the
/// interval ran at (w_c, f_c). With a stored truth table the compute cycles
/// and dynamic energy are re-derived from the measured time and energy at
/// that setting; without one the phase stats are already exact.
IntervalStats measured_stats(const PhaseRecord& phase, const VFTable& table,
                             const EnergyCoefficients& coeff, int w_c,
                             int f_c);

// --- classification (memory intensity x cache sensitivity) ---

enum class AppCategory { A, B, C, D };

char category_letter(AppCategory c);
AppCategory category_from_letter(char c);

enum class MpkiBasis { WeightedAverage, DominantPhase };

/// Category thresholds: memory intensive above 5 MPKI at the baseline
/// allocation; cache sensitive when MPKI drops by more than 20% of the
/// baseline MPKI between the 50% smaller and 50% larger allocations and the
/// baseline MPKI exceeds 0.2.
AppCategory classify(const AppProfile& app, const CacheGeometry& cache,
                     MpkiBasis basis = MpkiBasis::WeightedAverage);

// --- synthetic generation ---

/// Miss curves follow M(w) = M_inf + (M0 - M_inf) * exp(-k * (w - 2)).
struct SyntheticPhaseSpec {
  double weight = 1.0;
  double base_cpi = 1.0;
  double mpki_at_min = 0.0;    // MPKI at 2 ways (M0, per kilo-instruction)
  double mpki_floor = 0.0;     // MPKI limit for large allocations (M_inf)
  double decay_per_way = 0.0;  // k
  MlpHistogram mlp;
  double writeback_ratio = 0.0;  // write-backs per baseline miss
  double mem_latency_ns = 100.0;
  double dyn_epi_ref_nj = 2.0;  // core dynamic energy per instruction
};

struct SyntheticAppSpec {
  std::string name;
  double interval_ic = 100e6;
  std::vector<SyntheticPhaseSpec> phases;
  int trace_length = 8;
  double noise_sigma = 0.0;  // multiplicative noise on truth time/energy
  bool emit_truth = false;   // forced on when noise_sigma > 0
};

/// Deterministic for a fixed (spec, seed). Truth tables, when emitted,
/// perturb the analytical time and core energy log-normally with the given
/// sigma; at sigma 0 they coincide with the models exactly.
AppProfile generate_app(const SyntheticAppSpec& spec, const Platform& platform,
                        std::uint64_t seed);

/// Seeded parameter ranges per category used by the pool generator.
SyntheticAppSpec random_app_spec(AppCategory category, const std::string& name,
                                 int num_phases, int trace_length,
                                 double noise_sigma, Rng& rng);

struct Workload {
  std::vector<AppProfile> apps;  // one per core
  std::vector<double> alphas;    // QoS relaxation per app
  std::string pattern;
  std::uint64_t seed = 0;
};

QosTarget qos_target_for(const Workload& workload, const Platform& platform,
                         int core);

/// Picks apps uniformly (with replacement) from the pool to honor a
/// category pattern such as "2A2B".
Workload generate_workload_mix(const std::string& pattern,
                               const std::vector<AppProfile>& pool,
                               const CacheGeometry& cache, std::uint64_t seed);

/// Count/letter pairs, e.g. "2A2B" -> AABB.
std::vector<AppCategory> parse_pattern(const std::string& pattern);

// --- file formats ---

std::vector<AppProfile> database_from_json(const std::string& text);
std::string database_to_json(const std::vector<AppProfile>& apps);
std::vector<AppProfile> load_database(const std::filesystem::path& path);
void save_database(const std::vector<AppProfile>& apps,
                   const std::filesystem::path& path);

/// Workload file references database apps by name.
Workload workload_from_json(const std::string& text,
                            const std::vector<AppProfile>& database);
std::string workload_to_json(const Workload& workload);
Workload load_workload(const std::filesystem::path& path,
                       const std::vector<AppProfile>& database);
void save_workload(const Workload& workload,
                   const std::filesystem::path& path);

bool operator==(const TruthEntry& a, const TruthEntry& b);
bool structurally_equal(const AppProfile& a, const AppProfile& b);

}  // namespace rmsim

#endif
