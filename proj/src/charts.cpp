#include "regrowth/charts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "regrowth/csv.hpp"
#include "regrowth/errors.hpp"

namespace regrowth {

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<double>& x,
                          const std::vector<ChartSeries>& series) {
    const int width = 860, height = 420;
    const int ml = 60, mr = 20, mt = 40, mb = 40;
    double x_lo = x.empty() ? 0.0 : x.front();
    double x_hi = x.empty() ? 1.0 : x.back();
    double y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            if (first) {
                y_lo = y_hi = v;
                first = false;
            } else {
                y_lo = std::min(y_lo, v);
                y_hi = std::max(y_hi, v);
            }
        }
    }
    if (y_hi - y_lo < 1e-9) y_hi = y_lo + 1.0;
    const double pad = 0.06 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;
    if (x_hi - x_lo < 1e-9) x_hi = x_lo + 1.0;

    auto px = [&](double v) {
        return ml + (v - x_lo) / (x_hi - x_lo) * (width - ml - mr);
    };
    auto py = [&](double v) {
        return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb);
    };

    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"#444\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"#444\"/>\n";
    // zero line when visible
    if (y_lo < 0.0 && y_hi > 0.0) {
        out << "<line x1=\"" << ml << "\" y1=\"" << py(0.0) << "\" x2=\"" << width - mr
            << "\" y2=\"" << py(0.0) << "\" stroke=\"#bbb\" stroke-dasharray=\"3,3\"/>\n";
    }
    // x ticks every few points
    const std::size_t step = std::max<std::size_t>(1, x.size() / 10);
    for (std::size_t k = 0; k < x.size(); k += step) {
        out << "<text x=\"" << px(x[k]) << "\" y=\"" << height - mb + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_numeric(x[k]) << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double v = y_lo + k * (y_hi - y_lo) / 4.0;
        out << "<text x=\"" << ml - 6 << "\" y=\"" << py(v) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_numeric(std::round(v * 100.0) / 100.0) << "</text>\n";
    }
    int legend_y = mt + 6;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
        if (s.dashed) out << " stroke-dasharray=\"6,4\"";
        out << " points=\"";
        for (std::size_t k = 0; k < s.y.size() && k < x.size(); ++k) {
            if (!std::isfinite(s.y[k])) continue;
            out << px(x[k]) << ',' << py(s.y[k]) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << width - mr - 4 << "\" y=\"" << legend_y
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << s.color << "\">" << s.label << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

} // namespace regrowth
