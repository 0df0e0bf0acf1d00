#pragma once

// Minimal static-chart writer: renders line/step/scatter series to SVG for
// the CLI's plot outputs (Fast-p, Attempt-Fast-p, Pareto). No external deps.

#include <string>
#include <utility>
#include <vector>

#include "ucutlass/diagnostics.hpp"

namespace ucutlass {

struct ChartSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (x, y)
    bool scatter = false;  // draw markers only (no connecting line)
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    bool log_x = false;  // log-scaled x axis (requires x > 0)
    bool step = false;   // draw series as step functions (post-step)
};

// Render to a standalone SVG document. Throws DomainError on empty input or
// nonpositive x values under log_x.
std::string render_svg(const ChartSpec& spec, int width = 720, int height = 480);

}  // namespace ucutlass
