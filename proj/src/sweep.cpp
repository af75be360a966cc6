#include "cocoa_abm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "cocoa_abm/engine.hpp"
#include "cocoa_abm/io.hpp"
#include "cocoa_abm/version.hpp"

namespace cocoa_abm {

namespace fs = std::filesystem;
using nlohmann::json;

SweepPlan SweepPlan::default_plan(const ScenarioConfig& base) {
  SweepPlan p;
  p.base = base;
  p.p1_values = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  p.p2_values = p.p1_values;
  p.p3_values = p.p1_values;
  p.seeds.resize(30);
  std::iota(p.seeds.begin(), p.seeds.end(), 1);
  return p;
}

std::vector<AppParams> enumerate_scenarios(const SweepPlan& plan) {
  std::vector<AppParams> out;
  out.reserve(plan.p1_values.size() * plan.p2_values.size() *
              plan.p3_values.size());
  for (double p1 : plan.p1_values) {
    for (double p2 : plan.p2_values) {
      for (double p3 : plan.p3_values) {
        out.push_back(AppParams{p1, p2, p3});
      }
    }
  }
  return out;
}

std::string scenario_file_name(const AppParams& app) {
  return "runs_" + format_double(app.usage_rate) + "_" +
         format_double(app.outing_reduction) + "_" +
         format_double(app.registration_rate) + ".csv";
}

namespace {

void validate_plan(const SweepPlan& plan) {
  validate_config(plan.base);
  if (plan.p1_values.empty() || plan.p2_values.empty() ||
      plan.p3_values.empty()) {
    throw ConfigError("empty scenario grid");
  }
  for (const auto* values : {&plan.p1_values, &plan.p2_values,
                             &plan.p3_values}) {
    for (double v : *values) {
      if (v < 0.0 || v > 1.0) throw ConfigError("grid value out of [0,1]");
    }
  }
  if (plan.seeds.empty()) throw ConfigError("seeds empty");
}

json manifest_json(const SweepPlan& plan) {
  json j;
  j["tool_version"] = kVersion;
  j["config"] = json::parse(config_to_json(plan.base));
  j["config_hash"] = config_hash(plan.base);
  j["grid"]["p1"] = plan.p1_values;
  j["grid"]["p2"] = plan.p2_values;
  j["grid"]["p3"] = plan.p3_values;
  j["seeds"] = plan.seeds;
  json scenarios = json::array();
  for (const AppParams& app : enumerate_scenarios(plan)) {
    scenarios.push_back({{"p1", app.usage_rate},
                         {"p2", app.outing_reduction},
                         {"p3", app.registration_rate},
                         {"file", scenario_file_name(app)}});
  }
  j["scenarios"] = scenarios;
  return j;
}

// Complete runs already present in a scenario CSV, keyed by seed, each as the
// verbatim row block. A run counts as present iff it has exactly e1 rows.
std::map<std::uint64_t, std::string> scan_scenario_file(const fs::path& file,
                                                        int e1) {
  std::map<std::uint64_t, std::string> have;
  if (!fs::exists(file)) return have;
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line) || line != run_csv_header()) return {};
  std::map<std::uint64_t, std::pair<int, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(line.substr(0, line.find(',')));
    } catch (const std::exception&) {
      return {};
    }
    auto& entry = rows[seed];
    ++entry.first;
    entry.second += line;
    entry.second += '\n';
  }
  for (auto& [seed, entry] : rows) {
    if (entry.first == e1) have.emplace(seed, std::move(entry.second));
  }
  return have;
}

void parallel_for(std::size_t count, int parallelism,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const int nthreads = std::max(
      1, std::min<int>(parallelism, static_cast<int>(count)));
  if (nthreads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SweepStats run_sweep(const SweepPlan& plan, const fs::path& out_dir,
                     int parallelism,
                     const std::function<void(int, int)>& progress) {
  validate_plan(plan);
  fs::create_directories(out_dir);

  const json manifest = manifest_json(plan);
  const fs::path manifest_path = out_dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    json existing;
    try {
      existing = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("corrupt manifest.json: ") + e.what());
    }
    if (existing.value("config_hash", "") != manifest.at("config_hash") ||
        existing.value("grid", json()) != manifest.at("grid") ||
        existing.value("seeds", json()) != manifest.at("seeds")) {
      throw ConfigError(
          "existing result store was created from a different plan");
    }
  } else {
    write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  }

  const std::vector<AppParams> scenarios = enumerate_scenarios(plan);
  const int e1 = plan.base.max_days;

  struct ScenarioWork {
    AppParams app;
    fs::path file;
    std::map<std::uint64_t, std::string> have;
    std::vector<std::uint64_t> missing;
    std::vector<RunResult> fresh;
  };

  SweepStats stats;
  stats.scenarios_total = static_cast<int>(scenarios.size());
  std::vector<ScenarioWork> works;
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (const AppParams& app : scenarios) {
    ScenarioWork w;
    w.app = app;
    w.file = out_dir / scenario_file_name(app);
    w.have = scan_scenario_file(w.file, e1);
    for (std::uint64_t seed : plan.seeds) {
      if (w.have.find(seed) == w.have.end()) w.missing.push_back(seed);
    }
    if (w.missing.empty()) {
      ++stats.scenarios_skipped;
      continue;
    }
    ++stats.scenarios_run;
    w.fresh.resize(w.missing.size());
    const std::size_t wi = works.size();
    for (std::size_t mi = 0; mi < w.missing.size(); ++mi) {
      tasks.emplace_back(wi, mi);
    }
    works.push_back(std::move(w));
  }

  std::atomic<int> done{0};
  std::mutex progress_mu;
  parallel_for(tasks.size(), parallelism, [&](std::size_t t) {
    const auto [wi, mi] = tasks[t];
    ScenarioWork& w = works[wi];
    ScenarioConfig cfg = plan.base;
    cfg.app = w.app;
    w.fresh[mi] = run_simulation(cfg, w.missing[mi]);
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mu);
      progress(++done, static_cast<int>(tasks.size()));
    }
  });

  std::vector<std::string> write_errors;
  for (ScenarioWork& w : works) {
    std::ostringstream os;
    os << run_csv_header() << '\n';
    for (std::uint64_t seed : plan.seeds) {
      const auto kept = w.have.find(seed);
      if (kept != w.have.end()) {
        os << kept->second;
        continue;
      }
      const auto mi = static_cast<std::size_t>(
          std::find(w.missing.begin(), w.missing.end(), seed) -
          w.missing.begin());
      write_run_rows(os, w.fresh[mi]);
    }
    try {
      write_file_atomic(w.file, os.str());
    } catch (const std::exception& e) {
      write_errors.push_back(e.what());
    }
  }
  if (!write_errors.empty()) {
    std::string joined = "sweep write failures:";
    for (const std::string& e : write_errors) joined += "\n  " + e;
    throw std::runtime_error(joined);
  }
  return stats;
}

SweepStore SweepStore::open(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ConfigError("no manifest.json in " + dir.string());
  }
  json j;
  try {
    j = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("corrupt manifest.json: ") + e.what());
  }
  SweepStore store;
  store.dir = dir;
  try {
    store.plan.base = config_from_json(j.at("config").dump());
    store.plan.p1_values = j.at("grid").at("p1").get<std::vector<double>>();
    store.plan.p2_values = j.at("grid").at("p2").get<std::vector<double>>();
    store.plan.p3_values = j.at("grid").at("p3").get<std::vector<double>>();
    store.plan.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad manifest.json: ") + e.what());
  }
  return store;
}

ScenarioRuns SweepStore::load_scenario(const AppParams& app) const {
  const fs::path file = dir / scenario_file_name(app);
  if (!fs::exists(file)) {
    throw std::runtime_error("missing scenario file: " + file.string());
  }
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line) || line != run_csv_header()) {
    throw std::runtime_error("bad header in " + file.string());
  }
  std::map<std::uint64_t, std::vector<long long>> by_seed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 14) {
      throw std::runtime_error("bad row in " + file.string() + ": " + line);
    }
    by_seed[std::stoull(fields[0])].push_back(std::stoll(fields[10]));
  }
  ScenarioRuns sr;
  sr.app = app;
  std::string missing;
  for (std::uint64_t seed : plan.seeds) {
    const auto it = by_seed.find(seed);
    if (it == by_seed.end() ||
        it->second.size() != static_cast<std::size_t>(plan.base.max_days)) {
      missing += " (" + format_double(app.usage_rate) + "," +
                 format_double(app.outing_reduction) + "," +
                 format_double(app.registration_rate) + "," +
                 std::to_string(seed) + ")";
      continue;
    }
    sr.runs.push_back(RunSeries{seed, std::move(it->second)});
  }
  if (!missing.empty()) {
    throw std::runtime_error("incomplete results, missing runs:" + missing);
  }
  return sr;
}

std::vector<ScenarioRuns> SweepStore::load_all() const {
  std::vector<ScenarioRuns> out;
  for (const AppParams& app : enumerate_scenarios(plan)) {
    out.push_back(load_scenario(app));
  }
  return out;
}

CalibrationResult calibrate_beta(const ScenarioConfig& base,
                                 const std::vector<std::uint64_t>& seeds,
                                 double band_lo, double band_hi,
                                 double beta_lo, double beta_hi,
                                 int max_iterations, int parallelism) {
  ScenarioConfig cfg = base;
  cfg.app = AppParams{0.0, 0.0, 0.0};
  cfg = validate_config(cfg);
  if (seeds.empty()) throw ConfigError("seeds empty");
  if (!(band_lo >= 0.0 && band_lo <= band_hi && band_hi <= 1.0)) {
    throw ConfigError("band out of [0,1]");
  }
  if (!(beta_lo >= 0.0 && beta_lo <= beta_hi && beta_hi <= 1.0)) {
    throw ConfigError("beta search range out of [0,1]");
  }
  if (max_iterations < 2) throw ConfigError("max_iterations < 2");

  const double population = cfg.population();
  int iterations = 0;
  auto mean_final = [&](double beta) {
    ++iterations;
    ScenarioConfig c = cfg;
    c.beta = beta;
    std::vector<long long> finals(seeds.size());
    parallel_for(seeds.size(), parallelism, [&](std::size_t i) {
      finals[i] = run_simulation(c, seeds[i]).final_n_ip();
    });
    long long sum = 0;
    for (long long f : finals) sum += f;
    return static_cast<double>(sum) / static_cast<double>(seeds.size());
  };
  const auto in_band = [&](double mean) {
    const double frac = mean / population;
    return band_lo <= frac && frac <= band_hi;
  };

  const double mean_at_lo = mean_final(beta_lo);
  if (in_band(mean_at_lo)) {
    return CalibrationResult{beta_lo, mean_at_lo, iterations, true};
  }
  const double mean_at_hi = mean_final(beta_hi);
  if (in_band(mean_at_hi)) {
    return CalibrationResult{beta_hi, mean_at_hi, iterations, true};
  }
  const double frac_lo = mean_at_lo / population;
  const double frac_hi = mean_at_hi / population;
  if (frac_lo > band_hi || frac_hi < band_lo) {
    throw ConfigError("calibration band unreachable: mean infected fraction " +
                      format_double(frac_lo) + " at beta=" +
                      format_double(beta_lo) + " and " +
                      format_double(frac_hi) + " at beta=" +
                      format_double(beta_hi));
  }

  const double band_mid = 0.5 * (band_lo + band_hi) * population;
  double lo = beta_lo, hi = beta_hi;
  double best_beta = beta_lo, best_mean = mean_at_lo;
  double best_dist = std::abs(mean_at_lo - band_mid);
  while (iterations < max_iterations) {
    const double mid = 0.5 * (lo + hi);
    const double mean = mean_final(mid);
    if (in_band(mean)) return CalibrationResult{mid, mean, iterations, true};
    if (std::abs(mean - band_mid) < best_dist) {
      best_dist = std::abs(mean - band_mid);
      best_beta = mid;
      best_mean = mean;
    }
    if (mean / population < band_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return CalibrationResult{best_beta, best_mean, iterations, false};
}

}  // namespace cocoa_abm
