#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/csv.hpp"

namespace qcorr {

// Minimal self-contained line chart: 800x600 viewBox, one polyline per y
// column, 5 linear ticks per axis, inline legend, no external resources.
// Rows with an empty cell are skipped for that series only.
inline std::string render_line_chart(const CsvTable& table, const std::string& x_column,
                                     const std::vector<std::string>& y_columns) {
    const int xc = table.require_column(x_column);
    std::vector<int> ycs;
    for (const auto& name : y_columns) ycs.push_back(table.require_column(name));

    struct Point {
        double x, y;
    };
    std::vector<std::vector<Point>> series(ycs.size());
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool any = false;
    for (const auto& row : table.rows) {
        if (xc >= static_cast<int>(row.size()) || row[xc].empty()) continue;
        const double x = std::strtod(row[xc].c_str(), nullptr);
        for (std::size_t s = 0; s < ycs.size(); ++s) {
            const int yc = ycs[s];
            if (yc >= static_cast<int>(row.size()) || row[yc].empty()) continue;
            const double y = std::strtod(row[yc].c_str(), nullptr);
            series[s].push_back({x, y});
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (xmax - xmin < 1e-300) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax - ymin < 1e-300) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double w = 800.0, h = 600.0;
    const double ml = 70.0, mr = 20.0, mt = 20.0, mb = 50.0;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\"/>\n";
    svg << "</g>\n";

    svg << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int t = 0; t < 5; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        svg << "<line x1=\"" << px(fx) << "\" y1=\"" << h - mb << "\" x2=\"" << px(fx)
            << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(fx) << "\" y=\"" << h - mb + 20
            << "\" text-anchor=\"middle\">" << format_real(fx, 6) << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml << "\" y2=\""
            << py(fy) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\">" << format_real(fy, 6) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + w - mr) / 2.0 << "\" y=\"" << h - 10
        << "\" text-anchor=\"middle\">" << x_column << "</text>\n";
    svg << "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 8];
        if (series[s].size() == 1) {
            svg << "<circle cx=\"" << px(series[s][0].x) << "\" cy=\"" << py(series[s][0].y)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        } else if (!series[s].empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& p : series[s]) svg << format_real(px(p.x), 8) << "," << format_real(py(p.y), 8) << " ";
            svg << "\"/>\n";
        }
        const double ly = mt + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << w - mr - 120 << "\" y1=\"" << ly + 6 << "\" x2=\""
            << w - mr - 95 << "\" y2=\"" << ly + 6 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << w - mr - 90 << "\" y=\"" << ly + 10
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << y_columns[s] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

inline void write_svg(const std::string& content, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("svg: cannot open '" + path + "' for writing");
    f << content;
}

}  // namespace qcorr
