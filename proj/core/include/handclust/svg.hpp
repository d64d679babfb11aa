#pragma once

#include <string>
#include <utility>
#include <vector>

namespace handclust {

struct ScatterGroup {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct BarSeries {
    std::string name;
    std::vector<double> values;
    std::vector<double> errors; // optional whiskers, empty or same length
};

/// Component-1 vs component-2 scatter; centers drawn as red squares.
/// Output is self-contained SVG with no timestamps, so equal inputs give
/// byte-identical files.
std::string scatter_plot_svg(const std::string& title,
                             const std::vector<ScatterGroup>& groups,
                             const std::vector<std::pair<double, double>>& centers = {},
                             const std::string& x_label = "component 1",
                             const std::string& y_label = "component 2");

/// Grouped bar chart with optional error whiskers.
std::string bar_chart_svg(const std::string& title,
                          const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series,
                          const std::string& y_label);

} // namespace handclust
