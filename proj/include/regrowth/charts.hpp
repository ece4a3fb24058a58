#pragma once

#include <string>
#include <vector>

namespace regrowth {

// Minimal static SVG line chart, enough for the growth-path figures.
// Each series is a (label, y-values) pair over a shared x axis.
struct ChartSeries {
    std::string label;
    std::vector<double> y; // NaN breaks the line
    std::string color = "#1f6fb4";
    bool dashed = false;
};

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<double>& x,
                          const std::vector<ChartSeries>& series);

} // namespace regrowth
