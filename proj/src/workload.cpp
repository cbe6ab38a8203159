#include "rmsim/workload.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "rmsim/energy_model.hpp"
#include "rmsim/fsio.hpp"

namespace rmsim {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("workload: " + what);
}

}  // namespace

TruthTable::TruthTable(int min_way, int num_ways, int num_vf)
    : min_way_(min_way),
      num_ways_(num_ways),
      num_vf_(num_vf),
      cells_(static_cast<std::size_t>(num_ways) *
             static_cast<std::size_t>(num_vf)) {
  if (num_ways <= 0 || num_vf <= 0) fail("empty truth table");
}

bool TruthTable::covers(int w, int f_index) const {
  return w >= min_way_ && w < min_way_ + num_ways_ && f_index >= 0 &&
         f_index < num_vf_;
}

const TruthEntry& TruthTable::at(int w, int f_index) const {
  if (!covers(w, f_index))
    throw std::out_of_range("truth table: no entry for (w=" +
                            std::to_string(w) + ", f=" +
                            std::to_string(f_index) + ")");
  return cells_[static_cast<std::size_t>(w - min_way_) *
                    static_cast<std::size_t>(num_vf_) +
                static_cast<std::size_t>(f_index)];
}

TruthEntry& TruthTable::at(int w, int f_index) {
  return const_cast<TruthEntry&>(
      static_cast<const TruthTable&>(*this).at(w, f_index));
}

const PhaseRecord& AppProfile::phase(int phase_id) const {
  for (const auto& p : phases)
    if (p.phase_id == phase_id) return p;
  throw std::out_of_range("app '" + name + "': unknown phase id " +
                          std::to_string(phase_id));
}

void validate(const AppProfile& app) {
  const std::string ctx = "app '" + app.name + "': ";
  if (app.interval_ic <= 0.0) fail(ctx + "interval_ic must be > 0");
  if (app.phases.empty()) fail(ctx + "no phases");
  if (app.trace.empty()) fail(ctx + "empty phase trace");

  double weight_sum = 0.0;
  for (const auto& p : app.phases) {
    const std::string pctx = ctx + "phase " + std::to_string(p.phase_id) + ": ";
    if (p.weight < 0.0) fail(pctx + "negative weight");
    weight_sum += p.weight;
    if (p.stats.ic != app.interval_ic)
      fail(pctx + "stats.ic differs from interval_ic");
    try {
      validate(p.stats);
    } catch (const std::invalid_argument& e) {
      fail(pctx + e.what());
    }
    if (p.truth) {
      if (p.truth->min_way() != p.stats.miss_curve.min_way() ||
          p.truth->max_way() != p.stats.miss_curve.max_way())
        fail(pctx + "truth table way span differs from miss_curve");
    }
    for (const auto& q : app.phases)
      if (&p != &q && p.phase_id == q.phase_id)
        fail(ctx + "duplicate phase id " + std::to_string(p.phase_id));
  }
  if (std::abs(weight_sum - 1.0) > 1e-9)
    fail(ctx + "phase weights must sum to 1");
  for (int id : app.trace) {
    bool found = false;
    for (const auto& p : app.phases) found |= p.phase_id == id;
    if (!found) fail(ctx + "trace references unknown phase " + std::to_string(id));
  }
}

TruthEntry truth_entry(const PhaseRecord& phase, const VFTable& table,
                       const EnergyCoefficients& coeff, int w, int f_index) {
  if (phase.truth) return phase.truth->at(w, f_index);
  const IntervalStats& s = phase.stats;
  TruthEntry e;
  e.time_s = interval_time(s, w, table.point(f_index).frequency_hz);
  e.core_energy_j = scale_dynamic_energy(s.core_dyn_energy_ref_j, table,
                                         coeff.reference_vf_index, f_index) +
                    table.point(f_index).static_power_w * e.time_s;
  e.mem_accesses = s.miss_curve.at(w) + s.writebacks;
  return e;
}

IntervalStats measured_stats(const PhaseRecord& phase, const VFTable& table,
                             const EnergyCoefficients& coeff, int w_c,
                             int f_c) {
  if (!phase.truth) return phase.stats;

  IntervalStats s = phase.stats;
  const TruthEntry& t = phase.truth->at(w_c, f_c);
  const double f_hz = table.point(f_c).frequency_hz;
  const double stall_s = amat(s) * s.miss_curve.at(w_c);
  s.c_base = std::max(0.0, (t.time_s - stall_s) * f_hz);
  const double dyn_at_fc =
      std::max(0.0, t.core_energy_j -
                        table.point(f_c).static_power_w * t.time_s);
  s.core_dyn_energy_ref_j =
      scale_dynamic_energy(dyn_at_fc, table, f_c, coeff.reference_vf_index);
  return s;
}

char category_letter(AppCategory c) {
  switch (c) {
    case AppCategory::A: return 'A';
    case AppCategory::B: return 'B';
    case AppCategory::C: return 'C';
    default: return 'D';
  }
}

AppCategory category_from_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'A': return AppCategory::A;
    case 'B': return AppCategory::B;
    case 'C': return AppCategory::C;
    case 'D': return AppCategory::D;
    default: fail(std::string("unknown category letter '") + c + "'");
  }
}

namespace {

/// Nearest valid way count; distance ties resolve toward the baseline.
int round_way_toward(double x, int w_b) {
  const int lo = static_cast<int>(std::floor(x));
  const int hi = static_cast<int>(std::ceil(x));
  if (lo == hi) return lo;
  const double dl = x - lo;
  const double dh = hi - x;
  if (dl < dh) return lo;
  if (dh < dl) return hi;
  return std::abs(lo - w_b) <= std::abs(hi - w_b) ? lo : hi;
}

double app_mpki(const AppProfile& app, int w, MpkiBasis basis) {
  if (basis == MpkiBasis::DominantPhase) {
    const PhaseRecord* dominant = &app.phases.front();
    for (const auto& p : app.phases)
      if (p.weight > dominant->weight) dominant = &p;
    return dominant->stats.miss_curve.at(w) / dominant->stats.ic * 1000.0;
  }
  double mpki = 0.0;
  for (const auto& p : app.phases)
    mpki += p.weight * (p.stats.miss_curve.at(w) / p.stats.ic * 1000.0);
  return mpki;
}

}  // namespace

AppCategory classify(const AppProfile& app, const CacheGeometry& cache,
                     MpkiBasis basis) {
  const int w_b = cache.ways_per_core_baseline;
  const int w_small = round_way_toward(0.5 * w_b, w_b);
  const int w_large = round_way_toward(1.5 * w_b, w_b);
  for (const auto& p : app.phases) {
    if (!p.stats.miss_curve.contains(w_small) ||
        !p.stats.miss_curve.contains(w_large) ||
        !p.stats.miss_curve.contains(w_b))
      fail("app '" + app.name + "': miss curve does not cover ways " +
           std::to_string(w_small) + ", " + std::to_string(w_b) + ", " +
           std::to_string(w_large) + " needed for classification");
  }

  const double base = app_mpki(app, w_b, basis);
  const double drop = app_mpki(app, w_small, basis) - app_mpki(app, w_large, basis);
  const bool memory_intensive = base > 5.0;
  const bool cache_sensitive = drop > 0.2 * base && base > 0.2;
  if (memory_intensive)
    return cache_sensitive ? AppCategory::A : AppCategory::B;
  return cache_sensitive ? AppCategory::C : AppCategory::D;
}

AppProfile generate_app(const SyntheticAppSpec& spec, const Platform& platform,
                        std::uint64_t seed) {
  if (spec.phases.empty()) fail("synthetic spec: no phases");
  if (spec.trace_length < 1) fail("synthetic spec: trace_length must be >= 1");
  if (spec.noise_sigma < 0.0) fail("synthetic spec: negative noise sigma");

  const CacheGeometry& cache = platform.cache;
  const bool emit_truth = spec.emit_truth || spec.noise_sigma > 0.0;
  Rng rng(seed);

  double weight_sum = 0.0;
  for (const auto& ps : spec.phases) {
    if (ps.weight <= 0.0) fail("synthetic spec: phase weight must be > 0");
    if (ps.mpki_floor > ps.mpki_at_min)
      fail("synthetic spec: miss-curve floor above its starting level");
    if (ps.mpki_floor < 0.0 || ps.decay_per_way < 0.0)
      fail("synthetic spec: negative miss-curve shape parameter");
    if (ps.base_cpi <= 0.0) fail("synthetic spec: base_cpi must be > 0");
    weight_sum += ps.weight;
  }

  AppProfile app;
  app.name = spec.name;
  app.interval_ic = spec.interval_ic;

  for (std::size_t i = 0; i < spec.phases.size(); ++i) {
    const auto& ps = spec.phases[i];
    PhaseRecord rec;
    rec.phase_id = static_cast<int>(i);
    rec.weight = ps.weight / weight_sum;

    IntervalStats& s = rec.stats;
    s.ic = spec.interval_ic;
    s.c_base = ps.base_cpi * spec.interval_ic;
    std::vector<double> misses;
    for (int w = cache.min_ways_per_core; w <= cache.max_ways_per_core; ++w) {
      const double mpki =
          ps.mpki_floor + (ps.mpki_at_min - ps.mpki_floor) *
                              std::exp(-ps.decay_per_way *
                                       (w - cache.min_ways_per_core));
      misses.push_back(mpki * spec.interval_ic / 1000.0);
    }
    s.miss_curve = MissCurve(cache.min_ways_per_core, std::move(misses));
    s.mlp = ps.mlp;
    s.writebacks =
        ps.writeback_ratio * s.miss_curve.at(cache.ways_per_core_baseline);
    s.mem_latency_s = ps.mem_latency_ns * 1e-9;
    s.core_dyn_energy_ref_j = ps.dyn_epi_ref_nj * 1e-9 * spec.interval_ic;
    validate(s);

    if (emit_truth) {
      const int num_ways =
          cache.max_ways_per_core - cache.min_ways_per_core + 1;
      TruthTable table(cache.min_ways_per_core, num_ways, platform.vf.size());
      for (int w = cache.min_ways_per_core; w <= cache.max_ways_per_core; ++w) {
        for (int f = 0; f < platform.vf.size(); ++f) {
          TruthEntry e = truth_entry(rec, platform.vf, platform.energy, w, f);
          if (spec.noise_sigma > 0.0) {
            e.time_s *= std::exp(spec.noise_sigma * rng.normal());
            e.core_energy_j *= std::exp(spec.noise_sigma * rng.normal());
          }
          table.at(w, f) = e;
        }
      }
      rec.truth = std::move(table);
    }
    app.phases.push_back(std::move(rec));
  }

  // Trace construction: largest-remainder quotas keep realized frequencies
  // within 1/trace_length of the phase weights; quotas are laid out as a
  // shuffled sequence of contiguous runs.
  const int len = spec.trace_length;
  std::vector<int> quota(app.phases.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainder;
  int assigned = 0;
  for (std::size_t i = 0; i < app.phases.size(); ++i) {
    const double exact = app.phases[i].weight * len;
    quota[i] = static_cast<int>(std::floor(exact));
    assigned += quota[i];
    remainder.push_back({exact - quota[i], i});
  }
  std::stable_sort(remainder.begin(), remainder.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; r < len - assigned; ++r)
    ++quota[remainder[static_cast<std::size_t>(r) % remainder.size()].second];

  std::vector<std::pair<int, int>> runs;  // (phase id, run length)
  for (std::size_t i = 0; i < quota.size(); ++i) {
    int left = quota[i];
    if (left == 0) continue;
    const int pieces = 1 + rng.uniform_int(0, std::min(2, left - 1));
    for (int p = 0; p < pieces; ++p) {
      const int remaining_pieces = pieces - p;
      const int take = p + 1 == pieces ? left
                                       : std::max(1, left / remaining_pieces);
      runs.push_back({static_cast<int>(i), take});
      left -= take;
    }
  }
  for (std::size_t i = runs.size(); i > 1; --i)
    std::swap(runs[i - 1],
              runs[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  for (const auto& [id, count] : runs)
    app.trace.insert(app.trace.end(), static_cast<std::size_t>(count), id);

  validate(app);
  return app;
}

namespace {

MlpHistogram random_mlp(Rng& rng) {
  double raw[4];
  double sum = 0.0;
  for (double& v : raw) {
    v = rng.uniform(0.1, 1.0);
    sum += v;
  }
  MlpHistogram mlp;
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double p = raw[i] / sum;
    if (i == 3) p = 1.0 - acc;  // exact closure of the distribution
    acc += p;
    mlp.push_back({i + 1, p});
  }
  return mlp;
}

SyntheticPhaseSpec random_phase(AppCategory cat, Rng& rng) {
  SyntheticPhaseSpec ps;
  ps.weight = rng.uniform(0.5, 1.5);
  ps.mlp = random_mlp(rng);
  ps.writeback_ratio = rng.uniform(0.1, 0.4);
  ps.mem_latency_ns = rng.uniform(90.0, 110.0);
  ps.dyn_epi_ref_nj = rng.uniform(1.4, 3.0);
  switch (cat) {
    case AppCategory::A:
      ps.base_cpi = rng.uniform(0.4, 0.9);
      ps.mpki_floor = rng.uniform(2.5, 6.0);
      ps.mpki_at_min = ps.mpki_floor * rng.uniform(4.0, 7.0);
      ps.decay_per_way = rng.uniform(0.12, 0.28);
      break;
    case AppCategory::B:
      ps.base_cpi = rng.uniform(0.5, 1.0);
      ps.mpki_floor = rng.uniform(6.0, 14.0);
      ps.mpki_at_min = ps.mpki_floor;  // flat: insensitive to allocation
      ps.decay_per_way = 0.0;
      break;
    case AppCategory::C:
      ps.base_cpi = rng.uniform(0.9, 1.5);
      ps.mpki_floor = rng.uniform(0.4, 1.5);
      ps.mpki_at_min = ps.mpki_floor * rng.uniform(4.0, 6.0);
      ps.decay_per_way = rng.uniform(0.2, 0.35);
      break;
    case AppCategory::D:
      ps.base_cpi = rng.uniform(0.9, 1.6);
      ps.mpki_floor = rng.uniform(0.05, 1.2);
      ps.mpki_at_min = ps.mpki_floor;
      ps.decay_per_way = 0.0;
      break;
  }
  return ps;
}

}  // namespace

SyntheticAppSpec random_app_spec(AppCategory category, const std::string& name,
                                 int num_phases, int trace_length,
                                 double noise_sigma, Rng& rng) {
  SyntheticAppSpec spec;
  spec.name = name;
  spec.trace_length = trace_length;
  spec.noise_sigma = noise_sigma;
  for (int i = 0; i < num_phases; ++i)
    spec.phases.push_back(random_phase(category, rng));
  return spec;
}

QosTarget qos_target_for(const Workload& workload, const Platform& platform,
                         int core) {
  QosTarget t;
  t.alpha = workload.alphas.at(static_cast<std::size_t>(core));
  t.baseline_ways = platform.cache.ways_per_core_baseline;
  t.baseline_vf = platform.vf.baseline_index();
  return t;
}

std::vector<AppCategory> parse_pattern(const std::string& pattern) {
  std::vector<AppCategory> out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    int count = 0;
    while (i < pattern.size() &&
           std::isdigit(static_cast<unsigned char>(pattern[i]))) {
      count = count * 10 + (pattern[i] - '0');
      ++i;
    }
    if (count == 0) count = 1;
    if (i >= pattern.size()) fail("pattern '" + pattern + "' ends after a count");
    const AppCategory cat = category_from_letter(pattern[i]);
    ++i;
    out.insert(out.end(), static_cast<std::size_t>(count), cat);
  }
  if (out.empty()) fail("empty workload pattern");
  return out;
}

Workload generate_workload_mix(const std::string& pattern,
                               const std::vector<AppProfile>& pool,
                               const CacheGeometry& cache, std::uint64_t seed) {
  const auto wanted = parse_pattern(pattern);

  std::vector<std::vector<const AppProfile*>> by_category(4);
  for (const auto& app : pool)
    by_category[static_cast<std::size_t>(classify(app, cache))].push_back(&app);

  Rng rng(seed);
  Workload w;
  w.pattern = pattern;
  w.seed = seed;
  for (AppCategory cat : wanted) {
    const auto& candidates = by_category[static_cast<std::size_t>(cat)];
    if (candidates.empty())
      fail(std::string("pool has no category-") + category_letter(cat) +
           " app for pattern '" + pattern + "'");
    const int pick = rng.uniform_int(0, static_cast<int>(candidates.size()) - 1);
    w.apps.push_back(*candidates[static_cast<std::size_t>(pick)]);
    w.alphas.push_back(1.0);
  }
  return w;
}

// --- JSON round trip ---

namespace {

nlohmann::json app_to_json(const AppProfile& app) {
  nlohmann::json ja;
  ja["name"] = app.name;
  ja["interval_ic"] = app.interval_ic;
  ja["phases"] = nlohmann::json::array();
  for (const auto& p : app.phases) {
    nlohmann::json jp;
    jp["id"] = p.phase_id;
    jp["weight"] = p.weight;
    jp["c_base"] = p.stats.c_base;
    nlohmann::json jm = nlohmann::json::object();
    for (int w = p.stats.miss_curve.min_way(); w <= p.stats.miss_curve.max_way(); ++w)
      jm[std::to_string(w)] = p.stats.miss_curve.at(w);
    jp["miss_curve"] = std::move(jm);
    nlohmann::json jh = nlohmann::json::object();
    for (const auto& bin : p.stats.mlp)
      jh[std::to_string(bin.degree)] = bin.probability;
    jp["mlp"] = std::move(jh);
    jp["writebacks"] = p.stats.writebacks;
    jp["mem_latency_ns"] = p.stats.mem_latency_s * 1e9;
    jp["dyn_energy_ref_j"] = p.stats.core_dyn_energy_ref_j;
    if (p.truth) {
      nlohmann::json jt = nlohmann::json::array();
      for (int w = p.truth->min_way(); w <= p.truth->max_way(); ++w) {
        for (int f = 0; f < p.truth->num_vf(); ++f) {
          const TruthEntry& e = p.truth->at(w, f);
          jt.push_back({{"w", w},
                        {"f_index", f},
                        {"time_s", e.time_s},
                        {"core_j", e.core_energy_j},
                        {"mem_accesses", e.mem_accesses}});
        }
      }
      jp["truth"] = std::move(jt);
    }
    ja["phases"].push_back(std::move(jp));
  }
  ja["trace"] = app.trace;
  return ja;
}

AppProfile app_from_json(const nlohmann::json& ja) {
  AppProfile app;
  try {
    app.name = ja.at("name").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("app record: ") + e.what());
  }
  const std::string ctx = "app '" + app.name + "': ";
  try {
    app.interval_ic = ja.at("interval_ic").get<double>();
    for (const auto& jp : ja.at("phases")) {
      PhaseRecord p;
      p.phase_id = jp.at("id").get<int>();
      p.weight = jp.at("weight").get<double>();
      IntervalStats& s = p.stats;
      s.ic = app.interval_ic;
      s.c_base = jp.at("c_base").get<double>();

      std::map<int, double> curve;
      for (const auto& [key, value] : jp.at("miss_curve").items())
        curve[std::stoi(key)] = value.get<double>();
      if (curve.empty()) fail(ctx + "empty miss_curve");
      std::vector<double> misses;
      int expect = curve.begin()->first;
      for (const auto& [w, m] : curve) {
        if (w != expect)
          fail(ctx + "miss_curve way counts must be contiguous (gap at " +
               std::to_string(expect) + ")");
        misses.push_back(m);
        ++expect;
      }
      s.miss_curve = MissCurve(curve.begin()->first, std::move(misses));

      std::map<int, double> hist;
      for (const auto& [key, value] : jp.at("mlp").items())
        hist[std::stoi(key)] = value.get<double>();
      for (const auto& [degree, prob] : hist) s.mlp.push_back({degree, prob});

      s.writebacks = jp.at("writebacks").get<double>();
      s.mem_latency_s = jp.at("mem_latency_ns").get<double>() * 1e-9;
      s.core_dyn_energy_ref_j = jp.at("dyn_energy_ref_j").get<double>();

      if (jp.contains("truth")) {
        std::map<std::pair<int, int>, TruthEntry> cells;
        int w_lo = 0, w_hi = 0, f_hi = 0;
        bool first = true;
        for (const auto& jt : jp.at("truth")) {
          const int w = jt.at("w").get<int>();
          const int f = jt.at("f_index").get<int>();
          TruthEntry e;
          e.time_s = jt.at("time_s").get<double>();
          e.core_energy_j = jt.at("core_j").get<double>();
          e.mem_accesses = jt.at("mem_accesses").get<double>();
          if (!cells.emplace(std::make_pair(w, f), e).second)
            fail(ctx + "duplicate truth entry (w=" + std::to_string(w) +
                 ", f=" + std::to_string(f) + ")");
          if (first) {
            w_lo = w_hi = w;
            f_hi = f;
            first = false;
          } else {
            w_lo = std::min(w_lo, w);
            w_hi = std::max(w_hi, w);
            f_hi = std::max(f_hi, f);
          }
        }
        if (first) fail(ctx + "truth table present but empty");
        TruthTable table(w_lo, w_hi - w_lo + 1, f_hi + 1);
        for (int w = w_lo; w <= w_hi; ++w) {
          for (int f = 0; f <= f_hi; ++f) {
            auto it = cells.find({w, f});
            if (it == cells.end())
              fail(ctx + "truth table missing entry (w=" + std::to_string(w) +
                   ", f=" + std::to_string(f) + ")");
            table.at(w, f) = it->second;
          }
        }
        p.truth = std::move(table);
      }
      app.phases.push_back(std::move(p));
    }
    app.trace = ja.at("trace").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ctx + e.what());
  }
  validate(app);
  return app;
}

}  // namespace

std::vector<AppProfile> database_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("database: ") + e.what());
  }
  std::vector<AppProfile> apps;
  if (doc.is_array()) {
    for (const auto& ja : doc) apps.push_back(app_from_json(ja));
  } else {
    apps.push_back(app_from_json(doc));
  }
  return apps;
}

std::string database_to_json(const std::vector<AppProfile>& apps) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& app : apps) doc.push_back(app_to_json(app));
  return doc.dump(2);
}

std::vector<AppProfile> load_database(const std::filesystem::path& path) {
  return database_from_json(read_text_file(path));
}

void save_database(const std::vector<AppProfile>& apps,
                   const std::filesystem::path& path) {
  write_text_file_atomic(path, database_to_json(apps) + "\n");
}

Workload workload_from_json(const std::string& text,
                            const std::vector<AppProfile>& database) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("workload file: ") + e.what());
  }
  Workload w;
  try {
    w.pattern = doc.value("pattern", std::string());
    w.seed = doc.value("seed", std::uint64_t{0});
    for (const auto& jn : doc.at("apps")) {
      const auto name = jn.get<std::string>();
      auto it = std::find_if(database.begin(), database.end(),
                             [&](const AppProfile& a) { return a.name == name; });
      if (it == database.end())
        fail("workload references app '" + name + "' missing from the database");
      w.apps.push_back(*it);
    }
    if (doc.contains("alphas")) {
      w.alphas = doc.at("alphas").get<std::vector<double>>();
    } else {
      w.alphas.assign(w.apps.size(), 1.0);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("workload file: ") + e.what());
  }
  if (w.alphas.size() != w.apps.size())
    fail("workload: alphas count differs from app count");
  for (double a : w.alphas)
    if (!(a > 0.0 && a <= 1.0)) fail("workload: alpha outside (0, 1]");
  return w;
}

std::string workload_to_json(const Workload& workload) {
  nlohmann::json doc;
  doc["apps"] = nlohmann::json::array();
  for (const auto& app : workload.apps) doc["apps"].push_back(app.name);
  doc["pattern"] = workload.pattern;
  doc["alphas"] = workload.alphas;
  doc["seed"] = workload.seed;
  return doc.dump(2);
}

Workload load_workload(const std::filesystem::path& path,
                       const std::vector<AppProfile>& database) {
  return workload_from_json(read_text_file(path), database);
}

void save_workload(const Workload& workload,
                   const std::filesystem::path& path) {
  write_text_file_atomic(path, workload_to_json(workload) + "\n");
}

bool operator==(const TruthEntry& a, const TruthEntry& b) {
  return a.time_s == b.time_s && a.core_energy_j == b.core_energy_j &&
         a.mem_accesses == b.mem_accesses;
}

bool structurally_equal(const AppProfile& a, const AppProfile& b) {
  if (a.name != b.name || a.interval_ic != b.interval_ic ||
      a.trace != b.trace || a.phases.size() != b.phases.size())
    return false;
  for (std::size_t i = 0; i < a.phases.size(); ++i) {
    const auto& pa = a.phases[i];
    const auto& pb = b.phases[i];
    if (pa.phase_id != pb.phase_id || pa.weight != pb.weight) return false;
    const auto& sa = pa.stats;
    const auto& sb = pb.stats;
    if (sa.ic != sb.ic || sa.c_base != sb.c_base ||
        sa.writebacks != sb.writebacks ||
        sa.mem_latency_s != sb.mem_latency_s ||
        sa.core_dyn_energy_ref_j != sb.core_dyn_energy_ref_j)
      return false;
    if (sa.miss_curve.min_way() != sb.miss_curve.min_way() ||
        sa.miss_curve.values() != sb.miss_curve.values())
      return false;
    if (sa.mlp.size() != sb.mlp.size()) return false;
    for (std::size_t k = 0; k < sa.mlp.size(); ++k)
      if (sa.mlp[k].degree != sb.mlp[k].degree ||
          sa.mlp[k].probability != sb.mlp[k].probability)
        return false;
    if (pa.truth.has_value() != pb.truth.has_value()) return false;
    if (pa.truth) {
      if (pa.truth->min_way() != pb.truth->min_way() ||
          pa.truth->max_way() != pb.truth->max_way() ||
          pa.truth->num_vf() != pb.truth->num_vf())
        return false;
      for (int w = pa.truth->min_way(); w <= pa.truth->max_way(); ++w)
        for (int f = 0; f < pa.truth->num_vf(); ++f)
          if (!(pa.truth->at(w, f) == pb.truth->at(w, f))) return false;
    }
  }
  return true;
}

}  // namespace rmsim
