#include "cocoa_abm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "cocoa_abm/io.hpp"

namespace cocoa_abm {

const char* to_string(GrowthLabel label) {
  switch (label) {
    case GrowthLabel::Exponential: return "Exponential";
    case GrowthLabel::Linear: return "Linear";
    case GrowthLabel::Logarithmic: return "Logarithmic";
  }
  return "?";
}

GrowthLabel growth_label_from_string(const std::string& s) {
  if (s == "Exponential") return GrowthLabel::Exponential;
  if (s == "Linear") return GrowthLabel::Linear;
  if (s == "Logarithmic") return GrowthLabel::Logarithmic;
  throw std::invalid_argument("unknown growth label: " + s);
}

std::vector<long long> daily_increments(const std::vector<long long>& n_ip) {
  if (n_ip.size() < 2) throw std::invalid_argument("series length < 2");
  std::vector<long long> out(n_ip.size() - 1);
  for (std::size_t i = 0; i + 1 < n_ip.size(); ++i) {
    out[i] = n_ip[i + 1] - n_ip[i];
  }
  return out;
}

std::pair<double, double> fit_slope(const std::vector<double>& increments) {
  const std::size_t n = increments.size();
  if (n < 2) throw std::invalid_argument("fit_slope needs >= 2 points");
  double st = 0.0, sy = 0.0, sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) + 2.0;
    const double y = increments[i];
    st += t;
    sy += y;
    sty += t * y;
    stt += t * t;
  }
  const double nn = static_cast<double>(n);
  const double w = (nn * sty - st * sy) / (nn * stt - st * st);
  const double b = (sy - w * st) / nn;
  return {w, b};
}

std::pair<double, double> fit_slope(const std::vector<long long>& increments) {
  std::vector<double> y(increments.begin(), increments.end());
  return fit_slope(y);
}

GrowthLabel classify_growth(double w, double epsilon) {
  if (w > epsilon) return GrowthLabel::Exponential;
  if (w < -epsilon) return GrowthLabel::Logarithmic;
  return GrowthLabel::Linear;
}

TrendFit fit_trend(const std::vector<long long>& n_ip, double epsilon) {
  TrendFit fit;
  const auto [w, b] = fit_slope(daily_increments(n_ip));
  fit.w = w;
  fit.b = b;
  fit.label = classify_growth(w, epsilon);
  return fit;
}

std::vector<std::uint64_t> exclusion_set(
    const std::vector<RunSeries>& baseline_runs, long long threshold) {
  std::vector<std::uint64_t> out;
  for (const RunSeries& r : baseline_runs) {
    if (r.final_n_ip() < threshold) out.push_back(r.seed);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> exclusion_set(
    const std::vector<RunResult>& baseline_runs, long long threshold) {
  std::vector<std::uint64_t> out;
  for (const RunResult& r : baseline_runs) {
    if (r.final_n_ip() < threshold) out.push_back(r.seed);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SweepSummary> aggregate(const std::vector<ScenarioRuns>& results,
                                    const std::vector<std::uint64_t>& excluded,
                                    double slope_epsilon) {
  const std::unordered_set<std::uint64_t> ex(excluded.begin(), excluded.end());
  std::vector<SweepSummary> out;
  out.reserve(results.size());
  for (const ScenarioRuns& sc : results) {
    double sum = 0.0, sum_w = 0.0;
    std::vector<double> finals;
    for (const RunSeries& run : sc.runs) {
      if (ex.count(run.seed) != 0) continue;
      const double f = static_cast<double>(run.final_n_ip());
      finals.push_back(f);
      sum += f;
      sum_w += fit_slope(daily_increments(run.n_ip)).first;
    }
    if (finals.empty()) {
      throw std::invalid_argument("all seeds excluded for a scenario");
    }
    const double n = static_cast<double>(finals.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (double f : finals) ss += (f - mean) * (f - mean);
    SweepSummary s;
    s.app = sc.app;
    s.mean_total_infected = mean;
    s.std_total_infected = std::sqrt(ss / n);
    s.mean_w = sum_w / n;
    s.label = classify_growth(s.mean_w, slope_epsilon);
    s.n_seeds_included = static_cast<int>(finals.size());
    s.excluded_seeds = excluded;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<RunTrendRow> per_run_trends(
    const std::vector<ScenarioRuns>& results,
    const std::vector<std::uint64_t>& excluded, double slope_epsilon) {
  const std::unordered_set<std::uint64_t> ex(excluded.begin(), excluded.end());
  std::vector<RunTrendRow> out;
  for (const ScenarioRuns& sc : results) {
    for (const RunSeries& run : sc.runs) {
      if (ex.count(run.seed) != 0) continue;
      RunTrendRow row;
      row.app = sc.app;
      row.seed = run.seed;
      row.fit = fit_trend(run.n_ip, slope_epsilon);
      out.push_back(row);
    }
  }
  return out;
}

namespace {

constexpr const char* kSummaryHeader =
    "p1,p2,p3,mean_total_infected,std_total_infected,mean_w,label,n_seeds";

}  // namespace

void write_summary_csv(std::ostream& os,
                       const std::vector<SweepSummary>& summaries) {
  os << kSummaryHeader << '\n';
  for (const SweepSummary& s : summaries) {
    os << format_double(s.app.usage_rate) << ','
       << format_double(s.app.outing_reduction) << ','
       << format_double(s.app.registration_rate) << ','
       << format_double(s.mean_total_infected) << ','
       << format_double(s.std_total_infected) << ','
       << format_double(s.mean_w) << ',' << to_string(s.label) << ','
       << s.n_seeds_included << '\n';
  }
}

std::vector<SweepSummary> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSummaryHeader) {
    throw std::runtime_error("bad summary.csv header");
  }
  std::vector<SweepSummary> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8) {
      throw std::runtime_error("bad summary.csv row: " + line);
    }
    SweepSummary s;
    s.app.usage_rate = std::stod(fields[0]);
    s.app.outing_reduction = std::stod(fields[1]);
    s.app.registration_rate = std::stod(fields[2]);
    s.mean_total_infected = std::stod(fields[3]);
    s.std_total_infected = std::stod(fields[4]);
    s.mean_w = std::stod(fields[5]);
    s.label = growth_label_from_string(fields[6]);
    s.n_seeds_included = std::stoi(fields[7]);
    out.push_back(std::move(s));
  }
  return out;
}

void write_w_csv(std::ostream& os, const std::vector<RunTrendRow>& rows) {
  os << "p1,p2,p3,seed,w,label\n";
  for (const RunTrendRow& r : rows) {
    os << format_double(r.app.usage_rate) << ','
       << format_double(r.app.outing_reduction) << ','
       << format_double(r.app.registration_rate) << ',' << r.seed << ','
       << format_double(r.fit.w) << ',' << to_string(r.fit.label) << '\n';
  }
}

}  // namespace cocoa_abm
