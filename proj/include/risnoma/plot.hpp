// SPDX-License-Identifier: Apache-2.0
//
// risnoma - energy-efficient RIS-assisted NOMA downlink for LEO satellites
// Copyright (c) 2026 the risnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "risnoma/common.hpp"

namespace risnoma {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal static line chart as standalone SVG text. Enough to eyeball the
/// batch results; anything fancier belongs in a plotting tool fed by the CSVs.
inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<PlotSeries>& series)
{
    const int width = 720, height = 480;
    const int ml = 80, mr = 160, mt = 48, mb = 56;
    const double px = ml, py = mt, pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + (std::abs(ymin) > 0 ? std::abs(ymin) : 1) * 0.1;
    const double ypad = 0.06 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) { return px + pw * (x - xmin) / (xmax - xmin); };
    auto sy = [&](double y) { return py + ph * (1.0 - (y - ymin) / (ymax - ymin)); };
    auto num = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return std::string(buf);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"28\" text-anchor=\"middle\" " +
           "font-size=\"16\">" + title + "</text>\n";

    // Axes, ticks and grid.
    svg += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#333\"/>\n";
    const int nticks = 5;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / nticks;
        const double fy = ymin + (ymax - ymin) * i / nticks;
        svg += "<line x1=\"" + num(sx(fx)) + "\" y1=\"" + num(py) + "\" x2=\"" + num(sx(fx)) +
               "\" y2=\"" + num(py + ph) + "\" stroke=\"#ddd\"/>\n";
        svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(sy(fy)) + "\" x2=\"" + num(px + pw) +
               "\" y2=\"" + num(sy(fy)) + "\" stroke=\"#ddd\"/>\n";
        svg += "<text x=\"" + num(sx(fx)) + "\" y=\"" + num(py + ph + 18) +
               "\" text-anchor=\"middle\" font-size=\"11\">" + num(fx) + "</text>\n";
        svg += "<text x=\"" + num(px - 8) + "\" y=\"" + num(sy(fy) + 4) +
               "\" text-anchor=\"end\" font-size=\"11\">" + num(fy) + "</text>\n";
    }
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(height - 12) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + std::to_string(height / 2) +
           "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
           std::to_string(height / 2) + ")\">" + y_label + "</text>\n";

    // Series and legend.
    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 6];
        std::string pts;
        for (const auto& [x, y] : series[s].points)
            pts += num(sx(x)) + "," + num(sy(y)) + " ";
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        for (const auto& [x, y] : series[s].points)
            svg += "<circle cx=\"" + num(sx(x)) + "\" cy=\"" + num(sy(y)) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        const double ly = py + 16 + 18 * double(s);
        svg += "<line x1=\"" + num(px + pw + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(px + pw + 34) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(px + pw + 40) + "\" y=\"" + num(ly + 4) +
               "\" font-size=\"11\">" + series[s].label + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace risnoma
