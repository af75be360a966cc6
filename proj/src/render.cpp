#include "cocoa_abm/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cocoa_abm/io.hpp"

namespace cocoa_abm {

namespace {

constexpr double kEps = 1e-9;

std::string pct_label(double fraction) {
  return format_double(fraction * 100.0);
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt3g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double pick_value(const SweepSummary& s, const std::string& value) {
  if (value == "mean_total_infected") return s.mean_total_infected;
  if (value == "std_total_infected") return s.std_total_infected;
  if (value == "mean_w") return s.mean_w;
  throw std::invalid_argument("unknown heatmap value: " + value);
}

std::vector<double> unique_sorted(std::vector<double> v, bool ascending) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double a, double b) { return std::abs(a - b) < kEps; }),
          v.end());
  if (!ascending) std::reverse(v.begin(), v.end());
  return v;
}

std::size_t index_of(const std::vector<double>& values, double v) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - v) < kEps) return i;
  }
  throw std::invalid_argument("value not on grid axis");
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                          "#d62728", "#9467bd", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

}  // namespace

HeatmapGrid heatmap_from_summaries(const std::vector<SweepSummary>& summaries,
                                   double p3, const std::string& value) {
  HeatmapGrid grid;
  grid.p3 = p3;
  grid.value_name = value;
  std::vector<double> p1s, p2s;
  for (const SweepSummary& s : summaries) {
    if (std::abs(s.app.registration_rate - p3) >= kEps) continue;
    p1s.push_back(s.app.usage_rate);
    p2s.push_back(s.app.outing_reduction);
  }
  if (p1s.empty()) {
    throw std::invalid_argument("no summaries at p3=" + format_double(p3));
  }
  grid.p1_cols = unique_sorted(std::move(p1s), true);
  grid.p2_rows = unique_sorted(std::move(p2s), false);
  grid.cells.assign(grid.p1_cols.size() * grid.p2_rows.size(),
                    std::numeric_limits<double>::quiet_NaN());
  for (const SweepSummary& s : summaries) {
    if (std::abs(s.app.registration_rate - p3) >= kEps) continue;
    const std::size_t row = index_of(grid.p2_rows, s.app.outing_reduction);
    const std::size_t col = index_of(grid.p1_cols, s.app.usage_rate);
    grid.cells[row * grid.p1_cols.size() + col] = pick_value(s, value);
  }
  for (double c : grid.cells) {
    if (std::isnan(c)) {
      throw std::invalid_argument("summaries do not cover the full grid at p3=" +
                                  format_double(p3));
    }
  }
  return grid;
}

void write_heatmap_csv(std::ostream& os, const HeatmapGrid& grid) {
  os << "p2\\p1";
  for (double p1 : grid.p1_cols) os << ',' << pct_label(p1);
  os << '\n';
  for (std::size_t r = 0; r < grid.p2_rows.size(); ++r) {
    os << pct_label(grid.p2_rows[r]);
    for (std::size_t c = 0; c < grid.p1_cols.size(); ++c) {
      os << ',' << format_double(grid.at(r, c));
    }
    os << '\n';
  }
}

void write_heatmap_svg(std::ostream& os, const HeatmapGrid& grid) {
  const int cell = 64;
  const int left = 90, top = 70, right = 20, bottom = 40;
  const int ncols = static_cast<int>(grid.p1_cols.size());
  const int nrows = static_cast<int>(grid.p2_rows.size());
  const int width = left + ncols * cell + right;
  const int height = top + nrows * cell + bottom;

  double lo = grid.cells[0], hi = grid.cells[0];
  for (double v : grid.cells) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2
     << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"15\" fill=\"#111\">"
     << grid.value_name << " at p3=" << pct_label(grid.p3) << "%</text>\n";
  os << "<text x=\"" << left + ncols * cell / 2
     << "\" y=\"44\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\" fill=\"#333\">p1 (%)</text>\n";
  os << "<text x=\"20\" y=\"" << top + nrows * cell / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "fill=\"#333\" transform=\"rotate(-90 20 "
     << top + nrows * cell / 2 << ")\">p2 (%)</text>\n";

  for (int c = 0; c < ncols; ++c) {
    os << "<text x=\"" << left + c * cell + cell / 2
       << "\" y=\"64\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\" fill=\"#333\">"
       << pct_label(grid.p1_cols[static_cast<std::size_t>(c)]) << "</text>\n";
  }
  for (int r = 0; r < nrows; ++r) {
    os << "<text x=\"" << left - 8 << "\" y=\"" << top + r * cell + cell / 2 + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\"#333\">"
       << pct_label(grid.p2_rows[static_cast<std::size_t>(r)]) << "</text>\n";
  }

  for (int r = 0; r < nrows; ++r) {
    for (int c = 0; c < ncols; ++c) {
      const double v = grid.at(static_cast<std::size_t>(r),
                               static_cast<std::size_t>(c));
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      const int gb = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      const int x = left + c * cell;
      const int y = top + r * cell;
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
         << "\" height=\"" << cell << "\" fill=\"rgb(255," << gb << ',' << gb
         << ")\" stroke=\"#ccc\"/>\n";
      std::string label;
      if (grid.value_name == "mean_total_infected") {
        label = std::to_string(std::llround(v));
      } else {
        label = fmt3g(v);
      }
      os << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
         << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            "font-size=\"12\" fill=\""
         << (t > 0.5 ? "white" : "#333") << "\">" << label << "</text>\n";
    }
  }
  os << "</svg>\n";
}

void write_w_chart_svg(std::ostream& os,
                       const std::vector<SweepSummary>& summaries, double p3) {
  std::vector<double> p1s, p2s;
  for (const SweepSummary& s : summaries) {
    if (std::abs(s.app.registration_rate - p3) >= kEps) continue;
    p1s.push_back(s.app.usage_rate);
    p2s.push_back(s.app.outing_reduction);
  }
  if (p1s.empty()) {
    throw std::invalid_argument("no summaries at p3=" + format_double(p3));
  }
  const std::vector<double> p1_axis = unique_sorted(std::move(p1s), true);
  const std::vector<double> p2_axis = unique_sorted(std::move(p2s), true);
  const std::size_t n1 = p1_axis.size();
  const std::size_t n2 = p2_axis.size();

  std::vector<double> w(n1 * n2, std::numeric_limits<double>::quiet_NaN());
  for (const SweepSummary& s : summaries) {
    if (std::abs(s.app.registration_rate - p3) >= kEps) continue;
    w[index_of(p1_axis, s.app.usage_rate) * n2 +
      index_of(p2_axis, s.app.outing_reduction)] = s.mean_w;
  }
  for (double v : w) {
    if (std::isnan(v)) {
      throw std::invalid_argument("summaries do not cover the full grid at p3=" +
                                  format_double(p3));
    }
  }

  double wlo = 0.0, whi = 0.0;
  for (double v : w) {
    wlo = std::min(wlo, v);
    whi = std::max(whi, v);
  }
  double pad = 0.1 * (whi - wlo);
  if (pad <= 0.0) pad = 0.1;
  const double ylo = wlo - pad, yhi = whi + pad;

  const int bar_w = 18, bar_gap = 4, group_gap = 26;
  const int group_w = static_cast<int>(n2) * (bar_w + bar_gap) + group_gap;
  const int left = 70, top = 50, bottom = 70, right = 30;
  const int plot_h = 220;
  const int width = left + static_cast<int>(n1) * group_w + right;
  const int height = top + plot_h + bottom;
  const auto ypos = [&](double v) {
    return top + (yhi - v) / (yhi - ylo) * plot_h;
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2
     << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"15\" fill=\"#111\">mean w at p3=" << pct_label(p3)
     << "%</text>\n";

  for (double tick : {yhi, 0.5 * (ylo + yhi), ylo}) {
    const double y = ypos(tick);
    os << "<line x1=\"" << left << "\" y1=\"" << fmt2(y) << "\" x2=\""
       << left + static_cast<int>(n1) * group_w << "\" y2=\"" << fmt2(y)
       << "\" stroke=\"#eee\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << fmt2(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
          "fill=\"#333\">"
       << fmt3g(tick) << "</text>\n";
  }

  for (std::size_t g = 0; g < n1; ++g) {
    const int gx = left + static_cast<int>(g) * group_w + group_gap / 2;
    for (std::size_t b = 0; b < n2; ++b) {
      const double v = w[g * n2 + b];
      const double y0 = ypos(0.0), y1 = ypos(v);
      const int x = gx + static_cast<int>(b) * (bar_w + bar_gap);
      os << "<rect x=\"" << x << "\" y=\"" << fmt2(std::min(y0, y1))
         << "\" width=\"" << bar_w << "\" height=\""
         << fmt2(std::max(std::abs(y1 - y0), 0.5)) << "\" fill=\""
         << kPalette[b % kPaletteSize] << "\"/>\n";
    }
    os << "<text x=\"" << gx + (static_cast<int>(n2) * (bar_w + bar_gap) -
                                bar_gap) / 2
       << "\" y=\"" << top + plot_h + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\" fill=\"#333\">"
       << pct_label(p1_axis[g]) << "</text>\n";
  }
  os << "<line x1=\"" << left << "\" y1=\"" << fmt2(ypos(0.0)) << "\" x2=\""
     << left + static_cast<int>(n1) * group_w << "\" y2=\"" << fmt2(ypos(0.0))
     << "\" stroke=\"#333\"/>\n";
  os << "<text x=\"" << left + static_cast<int>(n1) * group_w / 2 << "\" y=\""
     << top + plot_h + 42
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "fill=\"#333\">p1 (%)</text>\n";

  for (std::size_t b = 0; b < n2; ++b) {
    const int y = top + plot_h + 58;
    const int x = left + static_cast<int>(b) * 90;
    os << "<rect x=\"" << x << "\" y=\"" << y - 9
       << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[b % kPaletteSize]
       << "\"/>\n";
    os << "<text x=\"" << x + 16 << "\" y=\"" << y
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">p2="
       << pct_label(p2_axis[b]) << "%</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace cocoa_abm
