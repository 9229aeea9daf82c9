#ifndef HCF_PLOT_HPP
#define HCF_PLOT_HPP

//
// Minimal SVG line plots, driven from CSV text so plotting stays out of the
// numeric path entirely.
//

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hcf/types.hpp"

namespace hcf {
namespace plot {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return columns[i];
        throw IoError("csv column not found: " + name);
    }
};

inline Csv parse_csv(const std::string& text) {
    Csv out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv");
    std::istringstream hdr(line);
    std::string cell;
    while (std::getline(hdr, cell, ',')) out.header.push_back(cell);
    out.columns.resize(out.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::size_t c = 0;
        while (std::getline(row, cell, ',') && c < out.columns.size())
            out.columns[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    return out;
}

struct PlotOptions {
    std::string title;
    std::string xlabel = "t";
    std::string ylabel;
    bool logx = false;
    bool logy = false;
    // optional power-law reference through the final point: y = c x^ref_slope
    bool reference = false;
    double ref_slope = -1.0;
};

namespace detail {

inline double tx(double v, bool logscale) { return logscale ? std::log10(v) : v; }

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

// One polyline over (xs, ys); points with non-plottable coordinates (log of a
// non-positive value) are skipped.
inline std::string line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                             const PlotOptions& opt) {
    const double w = 640, h = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    std::vector<double> px, py;
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
        if ((opt.logx && !(xs[i] > 0)) || (opt.logy && !(ys[i] > 0))) continue;
        px.push_back(detail::tx(xs[i], opt.logx));
        py.push_back(detail::tx(ys[i], opt.logy));
    }
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << opt.title << "</text>\n";
    if (px.size() < 2) {
        svg << "<text x='" << w / 2 << "' y='" << h / 2
            << "' text-anchor='middle' font-size='14'>not enough data</text>\n</svg>\n";
        return svg.str();
    }
    double x0 = *std::min_element(px.begin(), px.end());
    double x1 = *std::max_element(px.begin(), px.end());
    double y0 = *std::min_element(py.begin(), py.end());
    double y1 = *std::max_element(py.begin(), py.end());
    if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
    auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb); };

    svg << "<rect x='" << ml << "' y='" << mt << "' width='" << w - ml - mr << "' height='"
        << h - mt - mb << "' fill='none' stroke='black'/>\n";
    // 5 ticks per axis, labeled in data units
    for (int i = 0; i <= 4; ++i) {
        double fx = x0 + (x1 - x0) * i / 4.0;
        double fy = y0 + (y1 - y0) * i / 4.0;
        double vx = opt.logx ? std::pow(10.0, fx) : fx;
        double vy = opt.logy ? std::pow(10.0, fy) : fy;
        svg << "<line x1='" << sx(fx) << "' y1='" << h - mb << "' x2='" << sx(fx) << "' y2='"
            << h - mb + 5 << "' stroke='black'/>\n";
        svg << "<text x='" << sx(fx) << "' y='" << h - mb + 18
            << "' text-anchor='middle' font-size='11'>" << detail::num(vx) << "</text>\n";
        svg << "<line x1='" << ml - 5 << "' y1='" << sy(fy) << "' x2='" << ml << "' y2='"
            << sy(fy) << "' stroke='black'/>\n";
        svg << "<text x='" << ml - 8 << "' y='" << sy(fy) + 4
            << "' text-anchor='end' font-size='11'>" << detail::num(vy) << "</text>\n";
    }
    svg << "<text x='" << w / 2 << "' y='" << h - 12 << "' text-anchor='middle' font-size='13'>"
        << opt.xlabel << (opt.logx ? " (log)" : "") << "</text>\n";
    svg << "<text x='16' y='" << h / 2 << "' text-anchor='middle' font-size='13' transform='rotate(-90 16 "
        << h / 2 << ")'>" << opt.ylabel << (opt.logy ? " (log)" : "") << "</text>\n";

    if (opt.reference && opt.logx && opt.logy) {
        // y = c x^slope anchored at the final point, drawn across the x-range
        double cx = px.back(), cy = py.back();
        double ya = cy + opt.ref_slope * (x0 - cx);
        double yb = cy + opt.ref_slope * (x1 - cx);
        svg << "<line x1='" << sx(x0) << "' y1='" << sy(ya) << "' x2='" << sx(x1) << "' y2='"
            << sy(yb) << "' stroke='gray' stroke-dasharray='6,4'/>\n";
        svg << "<text x='" << w - mr - 8 << "' y='" << mt + 16
            << "' text-anchor='end' font-size='11' fill='gray'>slope " << opt.ref_slope
            << " reference</text>\n";
    }

    svg << "<polyline fill='none' stroke='#1f5fbf' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < px.size(); ++i)
        svg << sx(px[i]) << ',' << sy(py[i]) << ' ';
    svg << "'/>\n</svg>\n";
    return svg.str();
}

}  // namespace plot
}  // namespace hcf

#endif
