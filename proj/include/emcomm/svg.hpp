#pragma once

#include <string>
#include <vector>

namespace emcomm {

// Minimal static SVG emission for sweep results: a multi-series line/point
// chart and a value-labelled heatmap. No styling knobs beyond what the
// reproduce command needs.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool line = true;  // false: markers only
};

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series);

void write_heatmap(const std::string& path, const std::string& title,
                   const std::vector<std::string>& row_labels,
                   const std::vector<std::string>& col_labels,
                   const std::vector<std::vector<double>>& values, double vmin, double vmax);

}  // namespace emcomm
