#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cocoa_abm/analysis.hpp"

namespace cocoa_abm {

// One scenario slice at fixed p3: rows are p2 values descending top to
// bottom, columns are p1 values ascending left to right.
struct HeatmapGrid {
  double p3 = 0.0;
  std::vector<double> p2_rows;  // descending
  std::vector<double> p1_cols;  // ascending
  std::vector<double> cells;    // row-major, p2_rows.size() * p1_cols.size()
  std::string value_name;

  double at(std::size_t row, std::size_t col) const {
    return cells[row * p1_cols.size() + col];
  }
};

// value: "mean_total_infected", "std_total_infected", or "mean_w".
HeatmapGrid heatmap_from_summaries(const std::vector<SweepSummary>& summaries,
                                   double p3, const std::string& value);

// Wide CSV: header "p2\p1",<p1 percents ascending>; one row per p2 value
// descending. Axis labels in percent, cells raw.
void write_heatmap_csv(std::ostream& os, const HeatmapGrid& grid);

// Self-contained SVG, white-to-red ramp scaled to the grid's own min/max.
void write_heatmap_svg(std::ostream& os, const HeatmapGrid& grid);

// Bar chart of mean_w per scenario at fixed p3: groups along x are p1 values
// ascending, one bar per p2 value within each group, zero line drawn.
void write_w_chart_svg(std::ostream& os,
                       const std::vector<SweepSummary>& summaries, double p3);

}  // namespace cocoa_abm
