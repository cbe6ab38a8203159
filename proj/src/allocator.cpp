#include "rmsim/allocator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rmsim {

namespace {

constexpr int kDummyWays = 2;

EnergyCurve dummy_curve(int core_id) {
  EnergyCurve c;
  c.core_id = core_id;
  c.entries[kDummyWays] = {0.0, 0};
  return c;
}

int padded_size(int n) {
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
}

/// Split preference at a fixed combined budget: lower energy first, then
/// left total closest to the proportional share, then the smaller left
/// total. Group sizes in a padded tree are powers of two, so the share is
/// exact in double arithmetic and the comparison is deterministic.
bool split_better(double e_new, double dist_new, int wl_new, double e_best,
                  double dist_best, int wl_best) {
  if (e_new != e_best) return e_new < e_best;
  if (dist_new != dist_best) return dist_new < dist_best;
  return wl_new < wl_best;
}

}  // namespace

bool operator==(const AllocationVector& a, const AllocationVector& b) {
  return a.ways == b.ways && a.vf_indices == b.vf_indices;
}

ReductionTable leaf_table(const EnergyCurve& curve) {
  ReductionTable t;
  t.members = {curve.core_id};
  for (const auto& [w, entry] : curve.entries)
    t.tuples[w] = {entry.epi, {w}};
  return t;
}

ReductionTable reduce(const ReductionTable& x, const ReductionTable& y) {
  ReductionTable out;
  out.members = x.members;
  out.members.insert(out.members.end(), y.members.begin(), y.members.end());

  const double left_share = static_cast<double>(x.members.size()) /
                            static_cast<double>(out.members.size());

  // Best split found so far per combined budget.
  std::map<int, std::pair<double, int>> best;  // W_XY -> (dist, W_X)
  for (const auto& [wx, ex] : x.tuples) {
    for (const auto& [wy, ey] : y.tuples) {
      const int w = wx + wy;
      const double e = ex.epi_sum + ey.epi_sum;
      const double dist = std::abs(wx - w * left_share);
      auto it = out.tuples.find(w);
      if (it != out.tuples.end()) {
        const auto& [bdist, bwx] = best[w];
        if (!split_better(e, dist, wx, it->second.epi_sum, bdist, bwx))
          continue;
      }
      ReductionEntry entry;
      entry.epi_sum = e;
      entry.ways = ex.ways;
      entry.ways.insert(entry.ways.end(), ey.ways.begin(), ey.ways.end());
      out.tuples[w] = std::move(entry);
      best[w] = {dist, wx};
    }
  }
  return out;
}

ReductionTree::ReductionTree(std::vector<EnergyCurve> curves, int total_ways)
    : num_real_(static_cast<int>(curves.size())), total_ways_(total_ways) {
  if (curves.empty()) throw std::invalid_argument("reduction tree: no cores");
  const int n = padded_size(num_real_);
  for (int j = num_real_; j < n; ++j) curves.push_back(dummy_curve(j));
  leaves_ = std::move(curves);

  levels_.emplace_back();
  for (const auto& curve : leaves_) levels_[0].push_back(leaf_table(curve));
  for (int width = n / 2; width >= 1; width /= 2) {
    std::vector<ReductionTable> level;
    const auto& below = levels_.back();
    level.reserve(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i)
      level.push_back(run_reduce(below[2 * i], below[2 * i + 1]));
    levels_.push_back(std::move(level));
  }
}

ReductionTable ReductionTree::run_reduce(const ReductionTable& x,
                                         const ReductionTable& y) {
  ++reduce_calls_;
  ReductionTable t = reduce(x, y);
  t.generation = stamp_;
  return t;
}

void ReductionTree::update_core(int core_id, EnergyCurve curve) {
  if (core_id < 0 || core_id >= num_real_)
    throw std::out_of_range("reduction tree: bad core id");
  ++stamp_;
  curve.core_id = core_id;
  leaves_[static_cast<std::size_t>(core_id)] = std::move(curve);
  ReductionTable leaf = leaf_table(leaves_[static_cast<std::size_t>(core_id)]);
  leaf.generation = stamp_;
  levels_[0][static_cast<std::size_t>(core_id)] = std::move(leaf);

  int idx = core_id;
  for (std::size_t level = 1; level < levels_.size(); ++level) {
    idx /= 2;
    levels_[level][static_cast<std::size_t>(idx)] =
        run_reduce(levels_[level - 1][static_cast<std::size_t>(2 * idx)],
                   levels_[level - 1][static_cast<std::size_t>(2 * idx + 1)]);
  }
}

std::optional<AllocationVector> ReductionTree::optimize() const {
  return optimize(total_ways_);
}

std::optional<AllocationVector> ReductionTree::optimize(int total_ways) const {
  const int padded_total =
      total_ways + kDummyWays * (padded_cores() - num_real_);
  const ReductionTable& root = levels_.back().front();
  auto it = root.tuples.find(padded_total);
  if (it == root.tuples.end()) return std::nullopt;

  AllocationVector out;
  out.total_epi = it->second.epi_sum;
  out.ways.assign(it->second.ways.begin(),
                  it->second.ways.begin() + num_real_);
  out.vf_indices.reserve(static_cast<std::size_t>(num_real_));
  for (int j = 0; j < num_real_; ++j)
    out.vf_indices.push_back(
        leaves_[static_cast<std::size_t>(j)].entries.at(out.ways[j]).f_min_index);
  return out;
}

const EnergyCurve& ReductionTree::leaf_curve(int core_id) const {
  return leaves_.at(static_cast<std::size_t>(core_id));
}

const ReductionTable& ReductionTree::node(int level, int index) const {
  return levels_.at(static_cast<std::size_t>(level))
      .at(static_cast<std::size_t>(index));
}

namespace {

/// Flattened curve for O(1) lookups during the oracle search.
struct FlatCurve {
  int min_w = 0;
  std::vector<double> epi;  // NaN marks an infeasible way count

  bool has(int w) const {
    const int i = w - min_w;
    return i >= 0 && i < static_cast<int>(epi.size()) &&
           !std::isnan(epi[static_cast<std::size_t>(i)]);
  }
  double at(int w) const { return epi[static_cast<std::size_t>(w - min_w)]; }
};

struct OracleSearch {
  std::vector<FlatCurve> curves;
  std::vector<int> dom_min;  // per-leaf domain bounds
  std::vector<int> dom_max;

  int group_min(int lo, int hi) const {
    int s = 0;
    for (int j = lo; j < hi; ++j) s += dom_min[static_cast<std::size_t>(j)];
    return s;
  }
  int group_max(int lo, int hi) const {
    int s = 0;
    for (int j = lo; j < hi; ++j) s += dom_max[static_cast<std::size_t>(j)];
    return s;
  }

  /// Minimum group energy for budget w, or NaN when infeasible. Pure
  /// enumeration over every split; no memoization.
  double min_energy(int lo, int hi, int w) const {
    if (hi - lo == 1) {
      const auto& c = curves[static_cast<std::size_t>(lo)];
      return c.has(w) ? c.at(w) : std::numeric_limits<double>::quiet_NaN();
    }
    const int mid = lo + (hi - lo) / 2;
    const int wl_lo = std::max(group_min(lo, mid), w - group_max(mid, hi));
    const int wl_hi = std::min(group_max(lo, mid), w - group_min(mid, hi));
    double best = std::numeric_limits<double>::quiet_NaN();
    for (int wl = wl_lo; wl <= wl_hi; ++wl) {
      const double el = min_energy(lo, mid, wl);
      if (std::isnan(el)) continue;
      const double er = min_energy(mid, hi, w - wl);
      if (std::isnan(er)) continue;
      const double e = el + er;
      if (std::isnan(best) || e < best) best = e;
    }
    return best;
  }

  /// Reconstructs the winning vector by re-applying the split preference
  /// top-down.
  void pick(int lo, int hi, int w, std::vector<int>& out) const {
    if (hi - lo == 1) {
      out[static_cast<std::size_t>(lo)] = w;
      return;
    }
    const int mid = lo + (hi - lo) / 2;
    const double share =
        static_cast<double>(mid - lo) / static_cast<double>(hi - lo);
    const int wl_lo = std::max(group_min(lo, mid), w - group_max(mid, hi));
    const int wl_hi = std::min(group_max(lo, mid), w - group_min(mid, hi));
    double best_e = std::numeric_limits<double>::quiet_NaN();
    double best_dist = 0.0;
    int best_wl = 0;
    for (int wl = wl_lo; wl <= wl_hi; ++wl) {
      const double el = min_energy(lo, mid, wl);
      if (std::isnan(el)) continue;
      const double er = min_energy(mid, hi, w - wl);
      if (std::isnan(er)) continue;
      const double e = el + er;
      const double dist = std::abs(wl - w * share);
      if (std::isnan(best_e) ||
          split_better(e, dist, wl, best_e, best_dist, best_wl)) {
        best_e = e;
        best_dist = dist;
        best_wl = wl;
      }
    }
    pick(lo, mid, best_wl, out);
    pick(mid, hi, w - best_wl, out);
  }
};

}  // namespace

std::optional<AllocationVector> brute_force_optimize(
    const std::vector<EnergyCurve>& curves, int total_ways) {
  if (curves.empty()) return std::nullopt;
  const int num_real = static_cast<int>(curves.size());
  const int n = padded_size(num_real);
  const int budget = total_ways + kDummyWays * (n - num_real);

  OracleSearch search;
  for (int j = 0; j < n; ++j) {
    const EnergyCurve& curve =
        j < num_real ? curves[static_cast<std::size_t>(j)] : dummy_curve(j);
    if (curve.entries.empty()) return std::nullopt;
    const int min_w = curve.entries.begin()->first;
    const int max_w = curve.entries.rbegin()->first;
    FlatCurve flat;
    flat.min_w = min_w;
    flat.epi.assign(static_cast<std::size_t>(max_w - min_w + 1),
                    std::numeric_limits<double>::quiet_NaN());
    for (const auto& [w, entry] : curve.entries)
      flat.epi[static_cast<std::size_t>(w - min_w)] = entry.epi;
    search.curves.push_back(std::move(flat));
    search.dom_min.push_back(min_w);
    search.dom_max.push_back(max_w);
  }

  const double e = search.min_energy(0, n, budget);
  if (std::isnan(e)) return std::nullopt;

  std::vector<int> ways(static_cast<std::size_t>(n), 0);
  search.pick(0, n, budget, ways);

  AllocationVector out;
  out.total_epi = e;
  out.ways.assign(ways.begin(), ways.begin() + num_real);
  out.vf_indices.reserve(static_cast<std::size_t>(num_real));
  for (int j = 0; j < num_real; ++j)
    out.vf_indices.push_back(
        curves[static_cast<std::size_t>(j)].entries.at(out.ways[j]).f_min_index);
  return out;
}

}  // namespace rmsim
