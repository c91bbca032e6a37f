#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "chainscope/errors.hpp"

namespace chainscope::harness {

/// Minimal SVG line/marker chart, one panel per file.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool markers = false;
    bool stems = false;
};

struct PlotPanel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    bool log_y = false;
};

/// `provenance` is embedded verbatim as an XML comment.
inline void write_svg(const std::string& path, const PlotPanel& panel, const std::string& provenance = {}) {
    constexpr double kWidth = 640;
    constexpr double kHeight = 420;
    constexpr double kLeft = 70;
    constexpr double kRight = 20;
    constexpr double kTop = 40;
    constexpr double kBottom = 55;

    const auto ty = [&](double v) { return panel.log_y ? std::log10(std::max(v, 1e-300)) : v; };
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : panel.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
        if (s.stems && !panel.log_y) y0 = std::min(y0, 0.0);
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
    const auto py = [&](double y) { return kTop + (y1 - ty(y)) / (y1 - y0) * (kHeight - kTop - kBottom); };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        kWidth, kHeight);
    if (!provenance.empty()) svg += "<!--\n" + provenance + "-->\n";
    svg += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", kWidth / 2,
                       panel.title);
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                       kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + (x1 - x0) * t / 4.0;
        const double yv = y0 + (y1 - y0) * t / 4.0;
        const double ypix = kTop + (y1 - yv) / (y1 - y0) * (kHeight - kTop - kBottom);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.3g}</text>\n", px(xv),
                           kHeight - kBottom + 16, xv);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, ypix + 4,
                           panel.log_y ? fmt::format("1e{:.1f}", yv) : fmt::format("{:.3g}", yv));
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kWidth / 2, kHeight - 12,
                       panel.x_label);
    svg += fmt::format("<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
                       kHeight / 2, kHeight / 2, panel.y_label);

    double legend_y = kTop + 14;
    for (const auto& s : panel.series) {
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (s.stems) {
                svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\"/>\n",
                                   px(s.x[i]), py(panel.log_y ? std::pow(10.0, y0) : 0.0), py(s.y[i]), s.color);
            }
            if (s.markers || s.stems) {
                svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", px(s.x[i]),
                                   py(s.y[i]), s.color);
            } else {
                points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
            }
        }
        if (!points.empty()) {
            svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n", s.color,
                               points);
        }
        if (!s.label.empty()) {
            svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", kWidth - kRight - 150, legend_y,
                               s.color, s.label);
            legend_y += 15;
        }
    }
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot write plot");
    out << svg;
    if (!out) throw IoError(path, "write failed");
}

}  // namespace chainscope::harness
