#include "ucutlass/chart.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace ucutlass {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string format_tick(double value) {
    std::ostringstream out;
    if (std::abs(value) >= 1000 || (value != 0 && std::abs(value) < 0.01)) {
        out << std::setprecision(2) << std::scientific << value;
    } else {
        out << std::setprecision(4) << value;
    }
    return out.str();
}

// "Nice" tick positions covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
    if (hi <= lo) return {lo};
    const double raw_step = (hi - lo) / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = magnitude;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (magnitude * m >= raw_step) {
            step = magnitude * m;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
    std::vector<double> ticks;
    const int first = static_cast<int>(std::floor(std::log10(lo)));
    const int last = static_cast<int>(std::ceil(std::log10(hi)));
    for (int e = first; e <= last; ++e) {
        for (double m : {1.0, 2.0, 5.0}) {
            const double t = m * std::pow(10.0, e);
            if (t >= lo * (1 - 1e-12) && t <= hi * (1 + 1e-12)) ticks.push_back(t);
        }
    }
    if (ticks.empty()) ticks = {lo, hi};
    return ticks;
}

}  // namespace

std::string render_svg(const ChartSpec& spec, int width, int height) {
    if (spec.series.empty()) throw DomainError("chart has no series");
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first_point = true;
    for (const ChartSeries& s : spec.series) {
        if (s.points.empty()) throw DomainError("chart series '" + s.name + "' has no points");
        for (const auto& [x, y] : s.points) {
            if (spec.log_x && x <= 0) {
                throw DomainError("log-x chart requires positive x values");
            }
            if (first_point) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first_point = false;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, y);
                y_hi = std::max(y_hi, y);
            }
        }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1;
    if (y_hi == y_lo) y_hi = y_lo + 1;
    // A little headroom above and below the data.
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    const double margin_left = 70, margin_right = 20, margin_top = 40, margin_bottom = 55;
    const double plot_w = width - margin_left - margin_right;
    const double plot_h = height - margin_top - margin_bottom;

    auto map_x = [&](double x) {
        double t;
        if (spec.log_x) {
            t = (std::log(x) - std::log(x_lo)) / (std::log(x_hi) - std::log(x_lo));
        } else {
            t = (x - x_lo) / (x_hi - x_lo);
        }
        return margin_left + t * plot_w;
    };
    auto map_y = [&](double y) {
        return margin_top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;
    };

    std::ostringstream svg;
    svg << std::fixed << std::setprecision(2);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2.0 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\">"
        << escape_xml(spec.title) << "</text>\n";

    // Axes and ticks.
    const std::vector<double> x_ticks =
        spec.log_x ? log_ticks(x_lo, x_hi) : linear_ticks(x_lo, x_hi);
    const std::vector<double> y_ticks = linear_ticks(y_lo, y_hi);
    for (double t : y_ticks) {
        const double y = map_y(t);
        svg << "<line x1=\"" << margin_left << "\" y1=\"" << y << "\" x2=\""
            << margin_left + plot_w << "\" y2=\"" << y
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << margin_left - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_tick(t) << "</text>\n";
    }
    for (double t : x_ticks) {
        const double x = map_x(t);
        svg << "<line x1=\"" << x << "\" y1=\"" << margin_top << "\" x2=\"" << x << "\" y2=\""
            << margin_top + plot_h << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << margin_top + plot_h + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_tick(t) << "</text>\n";
    }
    svg << "<rect x=\"" << margin_left << "\" y=\"" << margin_top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << margin_top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << margin_top + plot_h / 2 << ")\">"
        << escape_xml(spec.y_label) << "</text>\n";

    // Series.
    for (std::size_t s = 0; s < spec.series.size(); ++s) {
        const ChartSeries& series = spec.series[s];
        const char* color = kPalette[s % kPaletteSize];
        auto sorted = series.points;
        std::sort(sorted.begin(), sorted.end());
        if (series.scatter) {
            for (const auto& [x, y] : sorted) {
                svg << "<circle cx=\"" << map_x(x) << "\" cy=\"" << map_y(y)
                    << "\" r=\"4\" fill=\"" << color << "\"/>\n";
            }
        } else {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"";
            double prev_y = 0;
            for (std::size_t i = 0; i < sorted.size(); ++i) {
                const auto& [x, y] = sorted[i];
                if (spec.step && i > 0) {
                    svg << map_x(x) << "," << map_y(prev_y) << " ";
                }
                svg << map_x(x) << "," << map_y(y) << " ";
                prev_y = y;
            }
            svg << "\"/>\n";
        }
        // Legend entry.
        const double legend_y = margin_top + 14 + 16.0 * static_cast<double>(s);
        svg << "<rect x=\"" << margin_left + plot_w - 150 << "\" y=\"" << legend_y - 9
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << margin_left + plot_w - 135 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(series.name)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace ucutlass
