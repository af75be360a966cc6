#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cocoa_abm/engine.hpp"

namespace cocoa_abm {

enum class GrowthLabel { Exponential, Linear, Logarithmic };

const char* to_string(GrowthLabel label);
GrowthLabel growth_label_from_string(const std::string& s);

// OLS fit of daily increments against the day index; the slope sign (with a
// dead-band) separates accelerating, steady, and converging epidemics.
struct TrendFit {
  double w = 0.0;
  double b = 0.0;
  GrowthLabel label = GrowthLabel::Linear;
};

// Day-over-day differences of a cumulative series: out[i] = s[i+1] - s[i].
// The first element corresponds to day 2. Throws on fewer than 2 points.
std::vector<long long> daily_increments(const std::vector<long long>& n_ip);

// Least squares (w, b) for increments[i] against t = i + 2, closed form.
// Throws on fewer than 2 points.
std::pair<double, double> fit_slope(const std::vector<double>& increments);
std::pair<double, double> fit_slope(const std::vector<long long>& increments);

// w > eps: Exponential; w < -eps: Logarithmic; otherwise Linear.
GrowthLabel classify_growth(double w, double epsilon);

TrendFit fit_trend(const std::vector<long long>& n_ip, double epsilon);

// One run's cumulative series as loaded from a result store.
struct RunSeries {
  std::uint64_t seed = 0;
  std::vector<long long> n_ip;

  long long final_n_ip() const { return n_ip.empty() ? 0 : n_ip.back(); }
};

struct ScenarioRuns {
  AppParams app;
  std::vector<RunSeries> runs;  // ascending seed
};

// Seeds whose no-app baseline run ends below the threshold; those seeds are
// dropped from every scenario's aggregate.
std::vector<std::uint64_t> exclusion_set(
    const std::vector<RunSeries>& baseline_runs, long long threshold);
std::vector<std::uint64_t> exclusion_set(
    const std::vector<RunResult>& baseline_runs, long long threshold);

struct SweepSummary {
  AppParams app;
  double mean_total_infected = 0.0;
  double std_total_infected = 0.0;  // population standard deviation
  double mean_w = 0.0;
  GrowthLabel label = GrowthLabel::Linear;
  int n_seeds_included = 0;
  std::vector<std::uint64_t> excluded_seeds;
};

// Per-scenario aggregates over the seeds not excluded. Every scenario must
// carry the same seed set; throws if the included set comes up empty.
std::vector<SweepSummary> aggregate(const std::vector<ScenarioRuns>& results,
                                    const std::vector<std::uint64_t>& excluded,
                                    double slope_epsilon);

// Per-run fits for the w table (seed order within each scenario).
struct RunTrendRow {
  AppParams app;
  std::uint64_t seed = 0;
  TrendFit fit;
};
std::vector<RunTrendRow> per_run_trends(const std::vector<ScenarioRuns>& results,
                                        const std::vector<std::uint64_t>& excluded,
                                        double slope_epsilon);

// summary.csv:
// p1,p2,p3,mean_total_infected,std_total_infected,mean_w,label,n_seeds
void write_summary_csv(std::ostream& os,
                       const std::vector<SweepSummary>& summaries);
std::vector<SweepSummary> read_summary_csv(std::istream& is);

// w.csv: p1,p2,p3,seed,w,label
void write_w_csv(std::ostream& os, const std::vector<RunTrendRow>& rows);

}  // namespace cocoa_abm
