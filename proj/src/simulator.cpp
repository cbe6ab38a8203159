#include "rmsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rmsim/energy_model.hpp"

namespace rmsim {

std::string to_string(RmaPolicy policy) {
  switch (policy) {
    case RmaPolicy::Idle: return "idle";
    case RmaPolicy::DvfsOnly: return "dvfs";
    case RmaPolicy::PartitionOnly: return "partition";
    default: return "combined";
  }
}

std::string to_string(ModelMode mode) {
  return mode == ModelMode::Perfect ? "perfect" : "analytical";
}

RmaPolicy policy_from_string(const std::string& name) {
  if (name == "idle") return RmaPolicy::Idle;
  if (name == "dvfs") return RmaPolicy::DvfsOnly;
  if (name == "partition") return RmaPolicy::PartitionOnly;
  if (name == "combined") return RmaPolicy::Combined;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

ModelMode mode_from_string(const std::string& name) {
  if (name == "perfect") return ModelMode::Perfect;
  if (name == "analytical") return ModelMode::Analytical;
  throw std::invalid_argument("unknown model mode '" + name + "'");
}

namespace {

double truth_ips(const PhaseRecord& phase, const Platform& platform, int w,
                 int f) {
  return phase.stats.ic /
         truth_entry(phase, platform.vf, platform.energy, w, f).time_s;
}

}  // namespace

Simulator::Simulator(const Workload& workload, const Platform& platform,
                     const SimOptions& options)
    : platform_(platform), options_(options) {
  if (static_cast<int>(workload.apps.size()) != platform.num_cores)
    throw std::invalid_argument(
        "simulator: workload app count differs from platform core count");
  if (workload.alphas.size() != workload.apps.size())
    throw std::invalid_argument("simulator: alphas count differs from apps");
  validate(platform_);

  report_.policy = options_.policy;
  report_.mode = options_.mode;
  report_.overheads_applied = options_.overheads_on();
  report_.quota_instructions = options_.quota_instructions;

  cores_.resize(workload.apps.size());
  for (std::size_t j = 0; j < cores_.size(); ++j) {
    CoreRt& c = cores_[j];
    c.app = &workload.apps[j];
    validate(*c.app);
    c.target = qos_target_for(workload, platform_, static_cast<int>(j));
    c.ways = platform_.cache.ways_per_core_baseline;
    c.vf = platform_.vf.baseline_index();
    c.remaining = c.app->interval_ic;
    refresh_rates(c);
    c.completion_time = c.remaining * c.tpi;
  }

  if (options_.policy == RmaPolicy::PartitionOnly ||
      options_.policy == RmaPolicy::Combined) {
    // Until a core delivers its first statistics it is represented by a
    // baseline-pinned placeholder; the zero EPI cannot skew other cores'
    // optimum because the entry is unique.
    std::vector<EnergyCurve> init;
    for (std::size_t j = 0; j < cores_.size(); ++j) {
      EnergyCurve curve;
      curve.core_id = static_cast<int>(j);
      curve.entries[platform_.cache.ways_per_core_baseline] = {
          0.0, platform_.vf.baseline_index()};
      init.push_back(std::move(curve));
    }
    tree_.emplace(std::move(init), platform_.cache.total_ways);
  }
}

const PhaseRecord& Simulator::current_phase(const CoreRt& c) const {
  return c.app->phase(c.app->trace[c.trace_pos]);
}

void Simulator::refresh_rates(CoreRt& c) {
  const TruthEntry e = truth_entry(current_phase(c), platform_.vf,
                                   platform_.energy, c.ways, c.vf);
  c.tpi = e.time_s / c.app->interval_ic;
  c.core_epj = e.core_energy_j / c.app->interval_ic;
  c.mem_per_instr = e.mem_accesses / c.app->interval_ic;
}

void Simulator::accrue(CoreRt& c, double n_instr) {
  if (n_instr <= 0.0) return;
  const double quota = options_.quota_instructions;
  const double counted =
      std::min(n_instr, std::max(0.0, quota - c.done_instr));
  if (c.done_instr < quota && c.done_instr + n_instr >= quota)
    c.t_quota = c.now - (n_instr - counted) * c.tpi;
  c.done_instr += n_instr;
  if (counted > 0.0) {
    c.core_energy_j += counted * c.core_epj;
    c.dram_energy_j +=
        counted * c.mem_per_instr * platform_.energy.dram_energy_per_access_j;
    c.mem_accesses += counted * c.mem_per_instr;
  }
}

void Simulator::advance_core(CoreRt& c, double t, bool owner) {
  double d = t - c.now;
  if (d < 0.0) d = 0.0;
  c.now = t;
  c.run_time_acc += d;
  const double stall_used = std::min(d, c.stall_s);
  c.stall_s -= stall_used;
  const double exec = d - stall_used;
  double n = owner ? c.remaining : (c.tpi > 0.0 ? exec / c.tpi : 0.0);
  n = std::min(n, c.remaining);
  c.remaining = owner ? 0.0 : c.remaining - n;
  accrue(c, n);
}

bool Simulator::done() const {
  for (const auto& c : cores_)
    if (c.done_instr < options_.quota_instructions) return false;
  return true;
}

StepEvent Simulator::step() {
  int owner = 0;
  for (std::size_t j = 1; j < cores_.size(); ++j)
    if (cores_[j].completion_time < cores_[owner].completion_time)
      owner = static_cast<int>(j);
  const double t = cores_[static_cast<std::size_t>(owner)].completion_time;

  for (std::size_t j = 0; j < cores_.size(); ++j)
    advance_core(cores_[j], t, static_cast<int>(j) == owner);
  now_ = t;

  CoreRt& c = cores_[static_cast<std::size_t>(owner)];
  ++report_.intervals_completed;
  ++c.intervals_done;

  // Eq.-4 audit of the setting the completed interval ran under, against
  // that interval's own ground truth.
  const PhaseRecord& completed = current_phase(c);
  {
    const double actual = truth_ips(completed, platform_, c.ways, c.vf);
    const double reference =
        truth_ips(completed, platform_, c.target.baseline_ways,
                  c.target.baseline_vf);
    if (actual < reference * c.target.alpha) ++report_.qos_violated_intervals;
  }

  const int completed_ways = c.ways;
  const int completed_vf = c.vf;

  ++c.trace_pos;
  if (c.trace_pos >= c.app->trace.size()) {
    c.trace_pos = 0;
    c.run_times.push_back(c.run_time_acc);
    c.run_time_acc = 0.0;
  }
  c.remaining = c.app->interval_ic;
  refresh_rates(c);
  c.completion_time = c.now + c.stall_s + c.remaining * c.tpi;

  if (options_.policy != RmaPolicy::Idle)
    invoke_rma(owner, completed, completed_ways, completed_vf);

  return {t, owner};
}

std::optional<int> Simulator::pick_vf(const ModelView& view, int w,
                                      bool fixed_baseline) const {
  const QosTarget& target = view.target;
  if (view.mode == ModelMode::Perfect) {
    const PhaseRecord& ph = *view.phase;
    if (!ph.stats.miss_curve.contains(w)) return std::nullopt;
    const double reference =
        truth_ips(ph, platform_, target.baseline_ways, target.baseline_vf) *
        target.alpha;
    if (fixed_baseline) {
      return truth_ips(ph, platform_, w, target.baseline_vf) >= reference
                 ? std::optional<int>(target.baseline_vf)
                 : std::nullopt;
    }
    for (int f = 0; f < platform_.vf.size(); ++f)
      if (truth_ips(ph, platform_, w, f) >= reference) return f;
    return std::nullopt;
  }
  if (fixed_baseline) {
    return qos_ok(view.measured, target, w, target.baseline_vf, platform_.vf)
               ? std::optional<int>(target.baseline_vf)
               : std::nullopt;
  }
  return f_min(view.measured, target, w, platform_.vf);
}

double Simulator::setting_epi(const ModelView& view, int w, int f) const {
  if (view.mode == ModelMode::Perfect) {
    const TruthEntry e =
        truth_entry(*view.phase, platform_.vf, platform_.energy, w, f);
    return (e.core_energy_j +
            e.mem_accesses * platform_.energy.dram_energy_per_access_j) /
           view.phase->stats.ic;
  }
  return epi(view.measured, w, f, platform_.vf, platform_.energy);
}

EnergyCurve Simulator::policy_curve(int core, const ModelView& view) const {
  const bool fixed = options_.policy == RmaPolicy::PartitionOnly;
  EnergyCurve curve;
  curve.core_id = core;
  for (int w = platform_.cache.min_ways_per_core;
       w <= platform_.cache.max_ways_per_core; ++w) {
    if (auto f = pick_vf(view, w, fixed))
      curve.entries[w] = {setting_epi(view, w, *f), *f};
  }
  return curve;
}

void Simulator::invoke_rma(int core, const PhaseRecord& completed,
                           int completed_ways, int completed_vf) {
  CoreRt& c = cores_[static_cast<std::size_t>(core)];
  ++report_.rma_invocations;

  ModelView view;
  view.mode = options_.mode;
  view.target = c.target;
  if (options_.mode == ModelMode::Perfect) {
    view.phase = &current_phase(c);  // cursor already points at the upcoming interval
  } else {
    view.phase = &completed;
    view.measured = measured_stats(completed, platform_.vf, platform_.energy,
                                   completed_ways, completed_vf);
  }

  DecisionRecord rec;
  rec.time_s = now_;
  rec.core = core;
  rec.interval_index = c.intervals_done;
  rec.phase_id = completed.phase_id;
  rec.ways_before = c.ways;
  rec.vf_before = c.vf;

  // The RMA's own instructions execute on the invoking core at its current
  // rates, before any setting changes.
  if (options_.overheads_on()) charge_rma_overhead(c);

  bool fallback = false;
  if (options_.policy == RmaPolicy::DvfsOnly) {
    auto f = pick_vf(view, platform_.cache.ways_per_core_baseline, false);
    if (!f) {
      ++report_.infeasible_events;
      fallback = true;
      f = platform_.vf.max_index();
    }
    apply_setting(c, platform_.cache.ways_per_core_baseline, *f);
  } else {
    tree_->update_core(core, policy_curve(core, view));
    auto alloc = tree_->optimize();
    if (!alloc) {
      // Pin the invoking core to the baseline allocation so the rest of the
      // system can still be optimized.
      ++report_.infeasible_events;
      fallback = true;
      const int f_pin = options_.policy == RmaPolicy::PartitionOnly
                            ? c.target.baseline_vf
                            : platform_.vf.max_index();
      EnergyCurve pinned;
      pinned.core_id = core;
      pinned.entries[platform_.cache.ways_per_core_baseline] = {
          setting_epi(view, platform_.cache.ways_per_core_baseline, f_pin),
          f_pin};
      tree_->update_core(core, std::move(pinned));
      alloc = tree_->optimize();
    }
    if (alloc) apply_allocation(*alloc);
  }

  rec.ways_after = c.ways;
  rec.vf_after = c.vf;
  rec.fallback = fallback;
  if (options_.log_decisions) report_.decisions.push_back(rec);
}

void Simulator::apply_allocation(const AllocationVector& alloc) {
  for (std::size_t k = 0; k < cores_.size(); ++k)
    apply_setting(cores_[k], alloc.ways[k], alloc.vf_indices[k]);
}

void Simulator::apply_setting(CoreRt& c, int ways, int vf) {
  const bool vf_changed = vf != c.vf;
  const bool ways_changed = ways != c.ways;
  if (!vf_changed && !ways_changed) return;

  if (vf_changed) {
    ++report_.dvfs_switches;
    if (options_.overheads_on()) {
      const auto& oh = platform_.overheads;
      c.stall_s += oh.dvfs_switch_time_s;
      report_.overhead_time_s += oh.dvfs_switch_time_s;
      report_.overhead_energy_j += oh.dvfs_switch_energy_j;
      if (c.done_instr < options_.quota_instructions)
        c.core_energy_j += oh.dvfs_switch_energy_j;
    }
  }
  if (ways_changed && options_.overheads_on() &&
      platform_.overheads.repartition_extra_mpki > 0.0) {
    // One-off refill cost for the reshuffled ways.
    const double extra = platform_.overheads.repartition_extra_mpki *
                         c.app->interval_ic / 1000.0;
    const double dt = amat(current_phase(c).stats) * extra;
    c.stall_s += dt;
    report_.overhead_time_s += dt;
    const double e = extra * platform_.energy.dram_energy_per_access_j;
    report_.overhead_energy_j += e;
    if (c.done_instr < options_.quota_instructions) {
      c.dram_energy_j += e;
      c.mem_accesses += extra;
    }
  }

  c.ways = ways;
  c.vf = vf;
  refresh_rates(c);
  c.completion_time = c.now + c.stall_s + c.remaining * c.tpi;
}

void Simulator::charge_rma_overhead(CoreRt& c) {
  const double dt = platform_.overheads.rma_instructions * c.tpi;
  const double e = platform_.overheads.rma_instructions * c.core_epj;
  c.stall_s += dt;
  c.completion_time += dt;
  report_.overhead_time_s += dt;
  report_.overhead_energy_j += e;
  if (c.done_instr < options_.quota_instructions) c.core_energy_j += e;
}

SimReport Simulator::finish() {
  if (finished_) return report_;
  while (!done()) step();
  finished_ = true;

  double end_time = 0.0;
  for (const auto& c : cores_) end_time = std::max(end_time, c.t_quota);
  report_.end_time_s = end_time;
  report_.shared_static_energy_j =
      platform_.energy.shared_static_power_w * end_time;

  double total = 0.0;
  for (const auto& c : cores_) {
    AppReport app;
    app.name = c.app->name;
    app.run_times_s = c.run_times;
    app.time_to_quota_s = c.t_quota;
    app.core_energy_j = c.core_energy_j;
    app.dram_energy_j = c.dram_energy_j;
    app.mem_accesses = c.mem_accesses;
    app.instructions = std::min(c.done_instr, options_.quota_instructions);
    total += app.core_energy_j + app.dram_energy_j;
    report_.apps.push_back(std::move(app));
  }
  report_.total_energy_j = total + report_.shared_static_energy_j;
  return report_;
}

SimReport run(const Workload& workload, const Platform& platform,
              const SimOptions& options) {
  Simulator sim(workload, platform, options);
  return sim.finish();
}

SimReport baseline_run(const Workload& workload, const Platform& platform,
                       double quota_instructions) {
  SimOptions options;
  options.policy = RmaPolicy::Idle;
  options.quota_instructions = quota_instructions;
  return run(workload, platform, options);
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const SimReport& report) {
  nlohmann::json doc;
  doc["policy"] = to_string(report.policy);
  doc["mode"] = to_string(report.mode);
  doc["overheads_applied"] = report.overheads_applied;
  doc["quota_instructions"] = report.quota_instructions;
  doc["end_time_s"] = report.end_time_s;
  doc["shared_static_energy_j"] = report.shared_static_energy_j;
  doc["total_energy_j"] = report.total_energy_j;
  doc["overhead_time_s"] = report.overhead_time_s;
  doc["overhead_energy_j"] = report.overhead_energy_j;
  doc["rma_invocations"] = report.rma_invocations;
  doc["dvfs_switches"] = report.dvfs_switches;
  doc["infeasible_events"] = report.infeasible_events;
  doc["intervals_completed"] = report.intervals_completed;
  doc["qos_violated_intervals"] = report.qos_violated_intervals;
  doc["apps"] = nlohmann::json::array();
  for (const auto& app : report.apps) {
    doc["apps"].push_back({{"name", app.name},
                           {"run_times_s", app.run_times_s},
                           {"time_to_quota_s", app.time_to_quota_s},
                           {"core_energy_j", app.core_energy_j},
                           {"dram_energy_j", app.dram_energy_j},
                           {"mem_accesses", app.mem_accesses},
                           {"instructions", app.instructions}});
  }
  return doc.dump(2);
}

std::string decisions_to_csv(const SimReport& report) {
  std::ostringstream out;
  out << "time_s,core,interval,phase,ways_before,vf_before,ways_after,"
         "vf_after,fallback\n";
  for (const auto& d : report.decisions) {
    out << fmt_double(d.time_s) << ',' << d.core << ',' << d.interval_index
        << ',' << d.phase_id << ',' << d.ways_before << ',' << d.vf_before
        << ',' << d.ways_after << ',' << d.vf_after << ','
        << (d.fallback ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string app_summary_to_csv(const SimReport& report) {
  std::ostringstream out;
  out << "core,app,instructions,core_energy_j,dram_energy_j,mem_accesses,"
         "time_to_quota_s,completed_runs,mean_run_time_s\n";
  for (std::size_t j = 0; j < report.apps.size(); ++j) {
    const auto& app = report.apps[j];
    double mean = 0.0;
    for (double t : app.run_times_s) mean += t;
    if (!app.run_times_s.empty())
      mean /= static_cast<double>(app.run_times_s.size());
    out << j << ',' << app.name << ',' << fmt_double(app.instructions) << ','
        << fmt_double(app.core_energy_j) << ',' << fmt_double(app.dram_energy_j)
        << ',' << fmt_double(app.mem_accesses) << ','
        << fmt_double(app.time_to_quota_s) << ',' << app.run_times_s.size()
        << ',' << fmt_double(mean) << '\n';
  }
  return out.str();
}

}  // namespace rmsim
