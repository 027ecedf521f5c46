#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdtk {

// Deterministic CSV: fixed header, rows formatted with %.17g so reruns with the
// same seed are byte-identical.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t j = 0; j < header.size(); ++j)
        os << (j ? "," : "") << header[j];
    os << "\n";
    char buf[64];
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width mismatch");
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", row[j]);
            os << (j ? "," : "") << buf;
        }
        os << "\n";
    }
}

// Self-contained SVG line plot (no external CSS/JS). One polyline per series.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::vector<SvgSeries>& series) {
    if (series.empty()) throw std::invalid_argument("write_svg_plot: no series");
    const int W = 640, H = 420, ML = 60, MR = 20, MT = 40, MB = 40;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw std::invalid_argument("write_svg_plot: bad series " + s.label);
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
    if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
    auto px = [&](double v) { return ML + (v - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ymin) / (ymax - ymin) * (H - MT - MB); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_svg_plot: cannot open " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
       << " font-size=\"16\">" << title << "</text>\n"
       << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
       << H - MB << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
       << "\" stroke=\"black\"/>\n";
    char buf[64];
    for (int tick = 0; tick <= 4; ++tick) {
        double xv = xmin + (xmax - xmin) * tick / 4.0;
        double yv = ymin + (ymax - ymin) * tick / 4.0;
        std::snprintf(buf, sizeof buf, "%.4g", xv);
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - MB + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << buf
           << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.4g", yv);
        os << "<text x=\"" << ML - 6 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << buf
           << "</text>\n";
    }
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        os << "<polyline fill=\"none\" stroke=\"" << palette[si % 6]
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < s.x.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[j]), py(s.y[j]));
            os << buf;
        }
        os << "\"/>\n<text x=\"" << W - MR - 4 << "\" y=\"" << MT + 16 * (si + 1)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
           << palette[si % 6] << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace gdtk
