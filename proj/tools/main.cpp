#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cocoa_abm/analysis.hpp"
#include "cocoa_abm/engine.hpp"
#include "cocoa_abm/io.hpp"
#include "cocoa_abm/render.hpp"
#include "cocoa_abm/sweep.hpp"
#include "cocoa_abm/version.hpp"

namespace fs = std::filesystem;
using namespace cocoa_abm;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t a = std::stoull(text.substr(0, dots));
    const std::uint64_t b = std::stoull(text.substr(dots + 2));
    if (a > b) throw ConfigError("seed range " + text + " is empty");
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  }
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw ConfigError("no seeds in \"" + text + "\"");
  return seeds;
}

// Comma-separated percents to fractions.
std::vector<double> parse_percent_list(const std::string& text,
                                       const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const double pct = std::stod(item);
    if (pct < 0.0 || pct > 100.0) {
      throw ConfigError(what + " value " + item + " out of [0,100]");
    }
    out.push_back(pct / 100.0);
  }
  if (out.empty()) throw ConfigError(what + " is empty");
  return out;
}

std::pair<double, double> parse_percent_pair(const std::string& text,
                                             const std::string& what) {
  const auto values = parse_percent_list(text, what);
  if (values.size() != 2 || values[0] > values[1]) {
    throw ConfigError(what + " must be \"LO,HI\" percents with LO <= HI");
  }
  return {values[0], values[1]};
}

int default_parallelism() {
  const char* env = std::getenv("COCOA_ABM_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int n = std::stoi(env);
    if (n >= 1) return n;
  } catch (const std::exception&) {
  }
  throw ConfigError("COCOA_ABM_THREADS must be a positive integer");
}

ScenarioConfig load_config(const std::string& path) {
  if (path.empty()) return default_config();
  return config_from_json_file(path);
}

void write_text(const std::string& out_path, const std::string& content) {
  if (out_path == "-") {
    std::cout << content;
    return;
  }
  const fs::path p(out_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  write_file_atomic(p, content);
}

int cmd_analyze(const std::string& results_dir, const std::string& out_dir,
                long long threshold) {
  const SweepStore store = SweepStore::open(results_dir);
  const std::vector<ScenarioRuns> all = store.load_all();

  const ScenarioRuns* baseline = nullptr;
  for (const ScenarioRuns& sr : all) {
    if (sr.app.usage_rate == 0.0 && sr.app.outing_reduction == 0.0 &&
        sr.app.registration_rate == 0.0) {
      baseline = &sr;
      break;
    }
  }
  if (baseline == nullptr) {
    throw ConfigError(
        "results store lacks the (0,0,0) baseline scenario needed for seed "
        "exclusion");
  }
  const std::vector<std::uint64_t> excluded =
      exclusion_set(baseline->runs, threshold);
  const double eps = store.plan.base.slope_epsilon;
  const std::vector<SweepSummary> summaries = aggregate(all, excluded, eps);
  const std::vector<RunTrendRow> trends = per_run_trends(all, excluded, eps);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  {
    std::ostringstream os;
    write_summary_csv(os, summaries);
    write_file_atomic(out / "summary.csv", os.str());
  }
  {
    std::ostringstream os;
    write_w_csv(os, trends);
    write_file_atomic(out / "w.csv", os.str());
  }
  for (double p3 : store.plan.p3_values) {
    const HeatmapGrid grid =
        heatmap_from_summaries(summaries, p3, "mean_total_infected");
    std::ostringstream os;
    write_heatmap_csv(os, grid);
    write_file_atomic(
        out / ("heatmap_p3_" + format_double(p3 * 100.0) + ".csv"), os.str());
  }
  nlohmann::json meta;
  meta["tool_version"] = kVersion;
  meta["config_hash"] = config_hash(store.plan.base);
  meta["threshold"] = threshold;
  meta["excluded_seeds"] = excluded;
  meta["n_excluded"] = excluded.size();
  meta["n_seeds"] = store.plan.seeds.size();
  write_file_atomic(out / "analysis.json", meta.dump(2) + "\n");

  std::cout << "analyzed " << summaries.size() << " scenarios, excluded "
            << excluded.size() << " of " << store.plan.seeds.size()
            << " seeds\n";
  return 0;
}

int cmd_render(const std::string& summary_dir, const std::string& out_dir) {
  std::istringstream is(read_file(fs::path(summary_dir) / "summary.csv"));
  const std::vector<SweepSummary> summaries = read_summary_csv(is);

  std::set<double> p3_values;
  for (const SweepSummary& s : summaries) {
    bool seen = false;
    for (double v : p3_values) {
      if (std::abs(v - s.app.registration_rate) < 1e-9) seen = true;
    }
    if (!seen) p3_values.insert(s.app.registration_rate);
  }

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  int files = 0;
  for (double p3 : p3_values) {
    const std::string pct = format_double(p3 * 100.0);
    {
      const HeatmapGrid grid =
          heatmap_from_summaries(summaries, p3, "mean_total_infected");
      std::ostringstream os;
      write_heatmap_svg(os, grid);
      write_file_atomic(out / ("heatmap_p3_" + pct + ".svg"), os.str());
    }
    {
      std::ostringstream os;
      write_w_chart_svg(os, summaries, p3);
      write_file_atomic(out / ("w_p3_" + pct + ".svg"), os.str());
    }
    files += 2;
  }
  std::cout << "rendered " << files << " figures for " << p3_values.size()
            << " p3 slices\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based SEIR+D simulator with a contact-confirming app"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  std::string events_path;
  std::uint64_t seed = 1;
  double p1_pct = 0.0, p2_pct = 0.0, p3_pct = 0.0, beta_pct = 0.0;
  int days = 0;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run one scenario and write its day-series CSV");
  sim->add_option("--config", config_path, "Scenario config JSON path");
  sim->add_option("--seed", seed, "Run seed");
  sim->add_option("--out", out_path, "Output CSV path, - for stdout");
  sim->add_option("--events", events_path,
                  "Also write the app contact-event log CSV to this path");
  auto* sim_p1 = sim->add_option("--p1", p1_pct, "App usage rate, percent");
  auto* sim_p2 =
      sim->add_option("--p2", p2_pct, "Outing reduction on notification, percent");
  auto* sim_p3 =
      sim->add_option("--p3", p3_pct, "Registration rate, percent");
  auto* sim_beta =
      sim->add_option("--beta", beta_pct, "Infection probability, percent");
  auto* sim_days = sim->add_option("--days", days, "Simulated days");

  std::string grid_p1 = "0,20,40,60,80,100";
  std::string grid_p2 = grid_p1, grid_p3 = grid_p1;
  std::string seeds_text = "1..30";
  std::string out_dir;
  int parallelism = 0;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the scenario grid and store one CSV per scenario");
  sweep->add_option("--config", config_path, "Scenario config JSON path");
  sweep->add_option("--out", out_dir, "Result store directory")->required();
  sweep->add_option("--grid-p1", grid_p1, "App usage rates, percent CSV");
  sweep->add_option("--grid-p2", grid_p2, "Outing reductions, percent CSV");
  sweep->add_option("--grid-p3", grid_p3, "Registration rates, percent CSV");
  sweep->add_option("--seeds", seeds_text, "Seed range A..B or CSV list");
  sweep->add_option("--parallelism", parallelism,
                    "Worker threads (default COCOA_ABM_THREADS or 1)");
  auto* sweep_beta =
      sweep->add_option("--beta", beta_pct, "Infection probability, percent");
  auto* sweep_days = sweep->add_option("--days", days, "Simulated days");

  std::string results_dir;
  long long threshold = 30;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Aggregate a result store into summary, w, and heatmap CSVs");
  analyze->add_option("--results", results_dir, "Result store directory")
      ->required();
  analyze->add_option("--out", out_dir, "Analysis output directory")
      ->required();
  analyze->add_option("--threshold", threshold,
                      "Baseline final n_ip below which a seed is excluded");

  std::string summary_dir;

  CLI::App* render = app.add_subcommand(
      "render", "Emit SVG heatmaps and w bar charts from summary.csv");
  render->add_option("--summary", summary_dir,
                     "Directory containing summary.csv")
      ->required();
  render->add_option("--out", out_dir, "Figure output directory")->required();

  std::string band_text = "5,10";
  std::string beta_range_text = "0,1";

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Bisect beta until the mean no-app final n_ip hits the band");
  calibrate->add_option("--config", config_path, "Scenario config JSON path");
  calibrate->add_option("--band", band_text,
                        "Target fraction of the population, percent LO,HI");
  calibrate->add_option("--beta-range", beta_range_text,
                        "Search interval for beta, percent LO,HI");
  calibrate->add_option("--seeds", seeds_text, "Seed range A..B or CSV list");
  calibrate->add_option("--parallelism", parallelism,
                        "Worker threads (default COCOA_ABM_THREADS or 1)");

  try {
    app.parse(argc, argv);

    if (parallelism < 1) parallelism = default_parallelism();

    if (*sim) {
      ScenarioConfig cfg = load_config(config_path);
      if (*sim_p1) cfg.app.usage_rate = p1_pct / 100.0;
      if (*sim_p2) cfg.app.outing_reduction = p2_pct / 100.0;
      if (*sim_p3) cfg.app.registration_rate = p3_pct / 100.0;
      if (*sim_beta) cfg.beta = beta_pct / 100.0;
      if (*sim_days) cfg.max_days = days;
      cfg = validate_config(cfg);
      RunOptions opts;
      opts.record_contact_log = !events_path.empty();
      const RunResult result = run_simulation(cfg, seed, opts);
      std::ostringstream os;
      write_run_csv(os, result);
      write_text(out_path, os.str());
      if (!events_path.empty()) {
        std::ostringstream es;
        write_contact_log_csv(es, result.contact_log);
        write_text(events_path, es.str());
      }
      return 0;
    }

    if (*sweep) {
      ScenarioConfig cfg = load_config(config_path);
      if (*sweep_beta) cfg.beta = beta_pct / 100.0;
      if (*sweep_days) cfg.max_days = days;
      SweepPlan plan;
      plan.base = validate_config(cfg);
      plan.p1_values = parse_percent_list(grid_p1, "--grid-p1");
      plan.p2_values = parse_percent_list(grid_p2, "--grid-p2");
      plan.p3_values = parse_percent_list(grid_p3, "--grid-p3");
      plan.seeds = parse_seeds(seeds_text);
      const SweepStats stats = run_sweep(
          plan, out_dir, parallelism, [](int done, int total) {
            if (done == total || done % 50 == 0) {
              std::cerr << "\r" << done << "/" << total << " runs" << std::flush;
              if (done == total) std::cerr << "\n";
            }
          });
      std::cout << "sweep complete: " << stats.scenarios_run << " scenarios run, "
                << stats.scenarios_skipped << " already present, "
                << stats.scenarios_total << " total\n";
      return 0;
    }

    if (*analyze) return cmd_analyze(results_dir, out_dir, threshold);
    if (*render) return cmd_render(summary_dir, out_dir);

    if (*calibrate) {
      const ScenarioConfig cfg = load_config(config_path);
      const auto [band_lo, band_hi] = parse_percent_pair(band_text, "--band");
      const auto [beta_lo, beta_hi] =
          parse_percent_pair(beta_range_text, "--beta-range");
      const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
      const CalibrationResult r =
          calibrate_beta(cfg, seeds, band_lo, band_hi, beta_lo, beta_hi, 20,
                         parallelism);
      std::cout << "beta=" << format_double(r.beta)
                << " beta_percent=" << format_double(r.beta * 100.0)
                << " mean_final_n_ip=" << format_double(r.mean_final_n_ip)
                << " fraction="
                << format_double(r.mean_final_n_ip / cfg.population())
                << " iterations=" << r.iterations
                << " converged=" << (r.converged ? "yes" : "no") << "\n";
      if (!r.converged) {
        std::cerr << "warning: iteration budget hit before the band; "
                     "reporting the closest probe\n";
      }
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
