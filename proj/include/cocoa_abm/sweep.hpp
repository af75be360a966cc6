#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cocoa_abm/analysis.hpp"
#include "cocoa_abm/domain.hpp"

namespace cocoa_abm {

struct SweepPlan {
  ScenarioConfig base;
  std::vector<double> p1_values;
  std::vector<double> p2_values;
  std::vector<double> p3_values;
  std::vector<std::uint64_t> seeds;

  static SweepPlan default_plan(const ScenarioConfig& base);
};

// Cartesian product in lexicographic (p1, p2, p3) order.
std::vector<AppParams> enumerate_scenarios(const SweepPlan& plan);

std::string scenario_file_name(const AppParams& app);

struct SweepStats {
  int scenarios_total = 0;
  int scenarios_run = 0;      // executed this invocation
  int scenarios_skipped = 0;  // already present in the store
};

// Runs every (scenario, seed) pair, one CSV per scenario plus manifest.json.
// Scenarios already present in the store are skipped, so an interrupted sweep
// picks up where it left off. Output bytes do not depend on parallelism.
SweepStats run_sweep(const SweepPlan& plan, const std::filesystem::path& out_dir,
                     int parallelism,
                     const std::function<void(int done, int total)>& progress = {});

// Store access for the analyze/render stages.
struct SweepStore {
  std::filesystem::path dir;
  SweepPlan plan;

  // Loaded from manifest.json; throws on missing or mismatched store.
  static SweepStore open(const std::filesystem::path& dir);

  std::vector<ScenarioRuns> load_all() const;
  ScenarioRuns load_scenario(const AppParams& app) const;
};

struct CalibrationResult {
  double beta = 0.0;
  double mean_final_n_ip = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Bisection on beta until the mean no-app final n_ip over the seeds lands in
// [band_lo, band_hi] (fractions of the population). Throws ConfigError when
// the band is not bracketed by the endpoints. iterations counts engine
// evaluation rounds, endpoints included.
CalibrationResult calibrate_beta(const ScenarioConfig& base,
                                 const std::vector<std::uint64_t>& seeds,
                                 double band_lo, double band_hi,
                                 double beta_lo, double beta_hi,
                                 int max_iterations = 20, int parallelism = 1);

}  // namespace cocoa_abm
