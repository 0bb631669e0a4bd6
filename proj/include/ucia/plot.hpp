// SPDX-License-Identifier: Apache-2.0
//
// ucia: user-cooperation interference alignment for two-cell MIMO broadcast channels
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
// ------------------------------------------------------------------------

#ifndef UCIA_PLOT_HPP
#define UCIA_PLOT_HPP

// Static SVG line charts of sum rate against SNR.

#include "ucia/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace ucia {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (snr_db, sum rate)
};

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

// Data extent widened by 5% of the span on each side; a degenerate span is widened by 1.
inline AxisRange padded_range(double lo, double hi) {
    double span = hi - lo;
    if (!(span > 0.0)) {
        lo -= 0.5;
        hi += 0.5;
        span = 1.0;
    }
    return {lo - 0.05 * span, hi + 0.05 * span};
}

// One series per (scheme, M, N, K), in CSV order.
inline std::vector<PlotSeries> series_from_rows(const std::vector<CsvRow>& rows) {
    std::vector<PlotSeries> out;
    std::map<std::tuple<std::string, int, int, int>, std::size_t> index;
    for (const CsvRow& r : rows) {
        const auto key = std::make_tuple(r.scheme, r.M, r.N, r.K);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            out.push_back({r.scheme + " (" + std::to_string(r.M) + "," + std::to_string(r.N) + "," +
                               std::to_string(r.K) + ")",
                           {}});
        }
        out[it->second].points.emplace_back(r.snr_db, r.sum_rate_mean);
    }
    return out;
}

inline std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title = "Ergodic sum rate") {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!std::isfinite(xmin))
        throw InvalidInput("render_svg: nothing to plot");
    const AxisRange xr = padded_range(xmin, xmax);
    const AxisRange yr = padded_range(ymin, ymax);

    constexpr double width = 720, height = 480, left = 70, right = 200, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;
    const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };
    static constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int t = 0; t <= 5; ++t) {
        const double xv = xr.lo + (xr.hi - xr.lo) * t / 5.0;
        const double yv = yr.lo + (yr.hi - yr.lo) * t / 5.0;
        os << "<line x1=\"" << px(xv) << "\" y1=\"" << top << "\" x2=\"" << px(xv) << "\" y2=\"" << top + ph
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
           << std::round(xv * 10) / 10 << "</text>\n";
        os << "<line x1=\"" << left << "\" y1=\"" << py(yv) << "\" x2=\"" << left + pw << "\" y2=\"" << py(yv)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
           << std::round(yv * 10) / 10 << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
    os << "<text transform=\"translate(18," << top + ph / 2
       << ") rotate(-90)\" text-anchor=\"middle\">Sum rate (bits/s/Hz)</text>\n";

    for (std::size_t n = 0; n < series.size(); ++n) {
        const auto& s = series[n];
        const char* colour = palette[n % palette.size()];
        if (s.points.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
            for (const auto& [x, y] : s.points)
                os << px(x) << ',' << py(y) << ' ';
            os << "\"/>\n";
        }
        for (const auto& [x, y] : s.points)
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
        const double ly = top + 16 + 18.0 * static_cast<double>(n);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
           << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace ucia

#endif
