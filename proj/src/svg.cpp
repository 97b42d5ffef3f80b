#include "emcomm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace emcomm {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kMarginLeft = 70, kMarginRight = 30, kMarginTop = 40, kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series) {
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double px = kWidth - kMarginLeft - kMarginRight;
    const double py = kHeight - kMarginTop - kMarginBottom;
    auto X = [&](double v) { return kMarginLeft + (v - xmin) / (xmax - xmin) * px; };
    auto Y = [&](double v) { return kHeight - kMarginBottom - (v - ymin) / (ymax - ymin) * py; };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' font-family='sans-serif' font-size='12'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    // axes
    out << "<line x1='" << kMarginLeft << "' y1='" << kHeight - kMarginBottom << "' x2='"
        << kWidth - kMarginRight << "' y2='" << kHeight - kMarginBottom << "' stroke='black'/>\n";
    out << "<line x1='" << kMarginLeft << "' y1='" << kMarginTop << "' x2='" << kMarginLeft
        << "' y2='" << kHeight - kMarginBottom << "' stroke='black'/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double fx = xmin + (xmax - xmin) * tick / 4.0;
        const double fy = ymin + (ymax - ymin) * tick / 4.0;
        out << "<text x='" << X(fx) << "' y='" << kHeight - kMarginBottom + 18
            << "' text-anchor='middle'>" << num(fx) << "</text>\n";
        out << "<text x='" << kMarginLeft - 8 << "' y='" << Y(fy) + 4
            << "' text-anchor='end'>" << num(fy) << "</text>\n";
    }
    out << "<text x='" << kWidth / 2 << "' y='" << kHeight - 10 << "' text-anchor='middle'>"
        << x_label << "</text>\n";
    out << "<text x='16' y='" << kHeight / 2 << "' text-anchor='middle' transform='rotate(-90 16 "
        << kHeight / 2 << ")'>" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (s.line && s.x.size() > 1) {
            out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
            }
            out << "'/>\n";
        }
        if (!s.line) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                out << "<circle cx='" << X(s.x[i]) << "' cy='" << Y(s.y[i])
                    << "' r='3' fill='" << color << "'/>\n";
            }
        }
        out << "<text x='" << kWidth - kMarginRight - 4 << "' y='"
            << kMarginTop + 14 * static_cast<int>(si) << "' text-anchor='end' fill='" << color
            << "'>" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

void write_heatmap(const std::string& path, const std::string& title,
                   const std::vector<std::string>& row_labels,
                   const std::vector<std::string>& col_labels,
                   const std::vector<std::vector<double>>& values, double vmin, double vmax) {
    const int rows = static_cast<int>(values.size());
    const int cols = rows > 0 ? static_cast<int>(values[0].size()) : 0;
    if (rows == 0 || cols == 0) throw std::invalid_argument("write_heatmap: empty grid");
    const double px = kWidth - kMarginLeft - kMarginRight;
    const double py = kHeight - kMarginTop - kMarginBottom;
    const double cw = px / cols;
    const double ch = py / rows;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' font-family='sans-serif' font-size='11'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << kWidth / 2 << "' y='20' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double f = (values[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] - vmin) /
                       (vmax - vmin);
            f = std::clamp(f, 0.0, 1.0);
            const int red = static_cast<int>(255 * (1.0 - f));
            const int green = static_cast<int>(80 + 150 * f);
            const int blue = static_cast<int>(255 * (1.0 - f) * 0.6 + 60);
            const double x = kMarginLeft + c * cw;
            // row 0 drawn at the bottom so axes increase upward
            const double y = kHeight - kMarginBottom - (r + 1) * ch;
            out << "<rect x='" << x << "' y='" << y << "' width='" << cw << "' height='" << ch
                << "' fill='rgb(" << red << ',' << green << ',' << blue
                << ")' stroke='white'/>\n";
            out << "<text x='" << x + cw / 2 << "' y='" << y + ch / 2 + 4
                << "' text-anchor='middle'>"
                << num(values[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)])
                << "</text>\n";
        }
    }
    for (int r = 0; r < rows; ++r) {
        out << "<text x='" << kMarginLeft - 6 << "' y='"
            << kHeight - kMarginBottom - (r + 0.5) * ch + 4 << "' text-anchor='end'>"
            << row_labels[static_cast<std::size_t>(r)] << "</text>\n";
    }
    for (int c = 0; c < cols; ++c) {
        out << "<text x='" << kMarginLeft + (c + 0.5) * cw << "' y='"
            << kHeight - kMarginBottom + 16 << "' text-anchor='middle'>"
            << col_labels[static_cast<std::size_t>(c)] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace emcomm
