#include "rmsim/platform.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rmsim {

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("platform: " + what);
}

}  // namespace

VFTable::VFTable(std::vector<VFPoint> points, int baseline_index)
    : points_(std::move(points)), baseline_index_(baseline_index) {
  check(points_.size() >= 2, "VF table needs at least 2 points");
  check(baseline_index_ >= 0 && baseline_index_ < size(),
        "baseline_index out of range");
  for (int i = 0; i < size(); ++i) {
    auto& p = points_[i];
    p.index = i;
    check(p.frequency_hz > 0.0, "frequency must be positive");
    check(p.voltage_v > 0.0, "voltage must be positive");
    check(p.static_power_w >= 0.0, "static power must be nonnegative");
    if (i > 0) {
      check(p.frequency_hz > points_[i - 1].frequency_hz,
            "frequencies must strictly increase");
      check(p.voltage_v > points_[i - 1].voltage_v,
            "voltages must strictly increase");
    }
  }
}

const VFPoint& VFTable::point(int index) const {
  if (index < 0 || index >= size())
    throw std::out_of_range("VF index " + std::to_string(index) +
                            " out of range [0," + std::to_string(size()) +
                            ")");
  return points_[static_cast<std::size_t>(index)];
}

void VFTable::set_baseline_index(int index) {
  if (index < 0 || index >= size())
    throw std::out_of_range("baseline VF index out of range");
  baseline_index_ = index;
}

VFTable default_vf_table(double static_power_per_volt) {
  std::vector<VFPoint> points(10);
  for (int i = 0; i < 10; ++i) {
    points[i].index = i;
    points[i].frequency_hz = (1.00 + 0.25 * i) * 1e9;
    points[i].voltage_v = 0.80 + 0.05 * i;
    points[i].static_power_w = static_power_per_volt * points[i].voltage_v;
  }
  return VFTable(std::move(points), 4);
}

double static_power(const VFTable& table, int index) {
  return table.point(index).static_power_w;
}

double scale_dynamic_energy(double e_ref_j, const VFTable& table, int from,
                            int to) {
  const double v_from = table.point(from).voltage_v;
  const double v_to = table.point(to).voltage_v;
  const double ratio = v_to / v_from;
  return e_ref_j * ratio * ratio;
}

CacheGeometry make_cache_geometry(int total_ways, std::size_t way_bytes,
                                  int num_cores, int max_ways_per_core) {
  check(num_cores >= 1, "need at least one core");
  check(total_ways >= 2 * num_cores, "fewer than 2 ways per core available");
  check(total_ways % num_cores == 0,
        "total ways must split evenly across cores");

  CacheGeometry g;
  g.total_ways = total_ways;
  g.ways_per_core_baseline = total_ways / num_cores;
  g.way_bytes = way_bytes;
  g.min_ways_per_core = 2;
  const int loosest = total_ways - 2 * (num_cores - 1);
  g.max_ways_per_core = max_ways_per_core == 0 ? loosest : max_ways_per_core;
  check(g.max_ways_per_core >= 2 && g.max_ways_per_core <= loosest,
        "max ways per core outside [2, A - 2*(N-1)]");
  return g;
}

Platform default_platform(int num_cores) {
  Platform p;
  p.vf = default_vf_table();
  // 8 ways / 2 MB per core, so one way holds 256 KB.
  p.cache = make_cache_geometry(8 * num_cores, 256 * 1024, num_cores);
  p.energy.reference_vf_index = p.vf.baseline_index();
  p.num_cores = num_cores;
  validate(p);
  return p;
}

void validate(const Platform& platform) {
  check(platform.num_cores >= 1, "need at least one core");
  check(platform.vf.size() >= 2, "VF table missing");
  check(platform.cache.ways_per_core_baseline * platform.num_cores ==
            platform.cache.total_ways,
        "baseline way split must cover the whole cache");
  check(platform.cache.min_ways_per_core * platform.num_cores <=
            platform.cache.total_ways,
        "minimum allocations exceed total ways");
  check(platform.energy.dram_energy_per_access_j >= 0.0 &&
            platform.energy.shared_static_power_w >= 0.0,
        "energy coefficients must be nonnegative");
  check(platform.energy.reference_vf_index >= 0 &&
            platform.energy.reference_vf_index < platform.vf.size(),
        "reference VF index out of range");
  check(platform.overheads.rma_instructions >= 0.0 &&
            platform.overheads.dvfs_switch_time_s >= 0.0 &&
            platform.overheads.dvfs_switch_energy_j >= 0.0 &&
            platform.overheads.repartition_extra_mpki >= 0.0,
        "overheads must be nonnegative");
}

Platform platform_from_json(const std::string& text, int num_cores) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("platform config: ") + e.what());
  }

  Platform p;
  try {
    std::vector<VFPoint> points;
    for (const auto& jp : doc.at("vf_points")) {
      VFPoint vp;
      vp.frequency_hz = jp.at("freq_hz").get<double>();
      vp.voltage_v = jp.at("volt").get<double>();
      vp.static_power_w = jp.at("static_w").get<double>();
      points.push_back(vp);
    }
    p.vf = VFTable(std::move(points), doc.at("baseline_index").get<int>());

    const auto& jc = doc.at("cache");
    p.cache = make_cache_geometry(jc.at("total_ways").get<int>(),
                                  jc.at("way_bytes").get<std::size_t>(),
                                  num_cores, jc.value("w_max", 0));

    const auto& je = doc.at("energy");
    p.energy.dram_energy_per_access_j = je.at("dram_nj_per_access").get<double>() * 1e-9;
    p.energy.shared_static_power_w = je.at("shared_static_w").get<double>();
    p.energy.reference_vf_index =
        je.value("reference_vf_index", p.vf.baseline_index());

    const auto& jo = doc.at("overheads");
    p.overheads.rma_instructions = jo.at("rma_instr").get<double>();
    p.overheads.dvfs_switch_time_s = jo.at("dvfs_us").get<double>() * 1e-6;
    p.overheads.dvfs_switch_energy_j = jo.at("dvfs_uj").get<double>() * 1e-6;
    p.overheads.repartition_extra_mpki = jo.at("repart_mpki").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("platform config: ") + e.what());
  }
  p.num_cores = num_cores;
  validate(p);
  return p;
}

std::string platform_to_json(const Platform& platform) {
  nlohmann::json doc;
  for (const auto& vp : platform.vf.points()) {
    doc["vf_points"].push_back({{"freq_hz", vp.frequency_hz},
                                {"volt", vp.voltage_v},
                                {"static_w", vp.static_power_w}});
  }
  doc["baseline_index"] = platform.vf.baseline_index();
  doc["cache"] = {{"total_ways", platform.cache.total_ways},
                  {"way_bytes", platform.cache.way_bytes},
                  {"w_max", platform.cache.max_ways_per_core}};
  doc["energy"] = {
      {"dram_nj_per_access", platform.energy.dram_energy_per_access_j * 1e9},
      {"shared_static_w", platform.energy.shared_static_power_w},
      {"reference_vf_index", platform.energy.reference_vf_index}};
  doc["overheads"] = {
      {"rma_instr", platform.overheads.rma_instructions},
      {"dvfs_us", platform.overheads.dvfs_switch_time_s * 1e6},
      {"dvfs_uj", platform.overheads.dvfs_switch_energy_j * 1e6},
      {"repart_mpki", platform.overheads.repartition_extra_mpki}};
  return doc.dump(2);
}

Platform load_platform(const std::filesystem::path& path, int num_cores) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open platform config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return platform_from_json(buf.str(), num_cores);
}

void save_platform(const Platform& platform,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write platform config: " + path.string());
  out << platform_to_json(platform) << '\n';
}

}  // namespace rmsim
