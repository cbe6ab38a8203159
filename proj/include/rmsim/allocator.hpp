#ifndef RMSIM_ALLOCATOR_HPP
#define RMSIM_ALLOCATOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rmsim/energy_model.hpp"

namespace rmsim {

/// A complete assignment: one way count and one VF index per core.
struct AllocationVector {
  std::vector<int> ways;
  std::vector<int> vf_indices;
  double total_epi = 0.0;
};

bool operator==(const AllocationVector& a, const AllocationVector& b);

/// Minimum-energy allocation tuples for one core group, keyed by the
/// group's total way budget: T_X(W_X) = [E_X, V_X].
struct ReductionEntry {
  double epi_sum = 0.0;
  std::vector<int> ways;  // aligned with the owning table's members
};

struct ReductionTable {
  std::vector<int> members;  // core ids in leaf order
  std::map<int, ReductionEntry> tuples;
  std::uint64_t generation = 0;
};

/// T_j(w) = [e_j(w), {w}] for a single core.
ReductionTable leaf_table(const EnergyCurve& curve);

/// Pairwise reduction: for every combined budget, the cheapest split
/// between the two groups. Ties prefer the left total closest to the
/// proportional share, then the smaller left total.
ReductionTable reduce(const ReductionTable& x, const ReductionTable& y);

/// Balanced binary reduction tree over per-core energy curves. Updating one
/// core recomputes exactly the log2(N) tables on its leaf-to-root path.
/// Core counts that are not powers of two are padded with dummy cores that
/// hold a single zero-EPI entry at the minimum allocation; the budget is
/// widened accordingly and dummies are stripped from returned vectors.
class ReductionTree {
public:
  ReductionTree(std::vector<EnergyCurve> curves, int total_ways);

  void update_core(int core_id, EnergyCurve curve);

  /// Allocation stored at the root for the configured way budget, or
  /// nullopt when no feasible assignment exists.
  std::optional<AllocationVector> optimize() const;
  std::optional<AllocationVector> optimize(int total_ways) const;

  int num_cores() const { return num_real_; }
  int padded_cores() const { return static_cast<int>(leaves_.size()); }
  int total_ways() const { return total_ways_; }
  std::uint64_t reduce_calls() const { return reduce_calls_; }

  const EnergyCurve& leaf_curve(int core_id) const;
  /// level 0 holds the per-core tables; the last level holds the root.
  const ReductionTable& node(int level, int index) const;
  int levels() const { return static_cast<int>(levels_.size()); }

private:
  ReductionTable run_reduce(const ReductionTable& x, const ReductionTable& y);

  std::vector<EnergyCurve> leaves_;
  std::vector<std::vector<ReductionTable>> levels_;
  int num_real_ = 0;
  int total_ways_ = 0;
  std::uint64_t reduce_calls_ = 0;
  std::uint64_t stamp_ = 0;
};

/// Exhaustive reference search over the same split structure, used as the
/// oracle for the reduction tree. No tables are kept; every feasible split
/// is re-enumerated recursively.
std::optional<AllocationVector> brute_force_optimize(
    const std::vector<EnergyCurve>& curves, int total_ways);

}  // namespace rmsim

#endif
