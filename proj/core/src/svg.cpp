#include "handclust/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace handclust {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 150; // legend space
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 48;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#555555",
                          "#9467bd", "#8c564b", "#17becf"};
constexpr int kPaletteSize = 7;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct Scale {
    double lo, hi;
    double px0, px1;

    double operator()(double v) const {
        if (hi == lo) return (px0 + px1) / 2.0;
        return px0 + (v - lo) / (hi - lo) * (px1 - px0);
    }
};

void expand(double& lo, double& hi) {
    if (lo > hi) {
        lo = 0.0;
        hi = 1.0;
    }
    const double pad = (hi - lo) * 0.06;
    if (pad == 0.0) {
        lo -= 1.0;
        hi += 1.0;
    } else {
        lo -= pad;
        hi += pad;
    }
}

void axes(std::ostringstream& s, const Scale& sx, const Scale& sy,
          const std::string& title, const std::string& x_label,
          const std::string& y_label) {
    s << "<rect x='0' y='0' width='" << kWidth << "' height='" << kHeight
      << "' fill='white'/>\n";
    s << "<text x='" << (kMarginLeft + (kWidth - kMarginLeft - kMarginRight) / 2)
      << "' y='24' font-size='15' text-anchor='middle' font-family='sans-serif'>"
      << title << "</text>\n";
    // frame
    s << "<rect x='" << kMarginLeft << "' y='" << kMarginTop << "' width='"
      << (kWidth - kMarginLeft - kMarginRight) << "' height='"
      << (kHeight - kMarginTop - kMarginBottom)
      << "' fill='none' stroke='#333333'/>\n";
    // ticks
    for (int i = 0; i <= 4; ++i) {
        const double fx = sx.lo + (sx.hi - sx.lo) * i / 4.0;
        const double px = sx(fx);
        s << "<line x1='" << num(px) << "' y1='" << (kHeight - kMarginBottom)
          << "' x2='" << num(px) << "' y2='" << (kHeight - kMarginBottom + 5)
          << "' stroke='#333333'/>\n";
        s << "<text x='" << num(px) << "' y='" << (kHeight - kMarginBottom + 18)
          << "' font-size='11' text-anchor='middle' font-family='sans-serif'>"
          << num(fx) << "</text>\n";
        const double fy = sy.lo + (sy.hi - sy.lo) * i / 4.0;
        const double py = sy(fy);
        s << "<line x1='" << (kMarginLeft - 5) << "' y1='" << num(py) << "' x2='"
          << kMarginLeft << "' y2='" << num(py) << "' stroke='#333333'/>\n";
        s << "<text x='" << (kMarginLeft - 8) << "' y='" << num(py + 4)
          << "' font-size='11' text-anchor='end' font-family='sans-serif'>"
          << num(fy) << "</text>\n";
    }
    s << "<text x='" << (kMarginLeft + (kWidth - kMarginLeft - kMarginRight) / 2)
      << "' y='" << (kHeight - 10)
      << "' font-size='12' text-anchor='middle' font-family='sans-serif'>" << x_label
      << "</text>\n";
    s << "<text x='16' y='" << (kMarginTop + (kHeight - kMarginTop - kMarginBottom) / 2)
      << "' font-size='12' text-anchor='middle' font-family='sans-serif' transform='rotate(-90 16 "
      << (kMarginTop + (kHeight - kMarginTop - kMarginBottom) / 2) << ")'>" << y_label
      << "</text>\n";
}

void legend_entry(std::ostringstream& s, int slot, const std::string& color,
                  const std::string& label) {
    const int x = kWidth - kMarginRight + 12;
    const int y = kMarginTop + 14 + slot * 18;
    s << "<rect x='" << x << "' y='" << (y - 9) << "' width='10' height='10' fill='"
      << color << "'/>\n";
    s << "<text x='" << (x + 15) << "' y='" << y
      << "' font-size='11' font-family='sans-serif'>" << label << "</text>\n";
}

} // namespace

std::string scatter_plot_svg(const std::string& title,
                             const std::vector<ScatterGroup>& groups,
                             const std::vector<std::pair<double, double>>& centers,
                             const std::string& x_label, const std::string& y_label) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& g : groups) {
        for (const auto& [x, y] : g.points) {
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    for (const auto& [x, y] : centers) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    }
    expand(xlo, xhi);
    expand(ylo, yhi);
    const Scale sx{xlo, xhi, kMarginLeft, kWidth - kMarginRight};
    const Scale sy{ylo, yhi, kHeight - kMarginBottom, kMarginTop}; // y up

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "'>\n";
    axes(s, sx, sy, title, x_label, y_label);
    int slot = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const std::string color = kPalette[g % kPaletteSize];
        for (const auto& [x, y] : groups[g].points) {
            s << "<circle cx='" << num(sx(x)) << "' cy='" << num(sy(y))
              << "' r='2.5' fill='" << color << "' fill-opacity='0.6'/>\n";
        }
        legend_entry(s, slot++, color, groups[g].name);
    }
    for (const auto& [x, y] : centers) {
        s << "<rect x='" << num(sx(x) - 5) << "' y='" << num(sy(y) - 5)
          << "' width='10' height='10' fill='#d62728'/>\n";
    }
    if (!centers.empty()) legend_entry(s, slot++, "#d62728", "cluster centers");
    s << "</svg>\n";
    return s.str();
}

std::string bar_chart_svg(const std::string& title,
                          const std::vector<std::string>& categories,
                          const std::vector<BarSeries>& series,
                          const std::string& y_label) {
    double hi = 0.0, lo = 0.0;
    for (const auto& sr : series) {
        for (std::size_t i = 0; i < sr.values.size(); ++i) {
            const double err = i < sr.errors.size() ? sr.errors[i] : 0.0;
            hi = std::max(hi, sr.values[i] + err);
            lo = std::min(lo, sr.values[i] - err);
        }
    }
    if (hi == lo) hi = lo + 1.0;
    hi += (hi - lo) * 0.08;
    const Scale sy{lo, hi, kHeight - kMarginBottom, kMarginTop};

    const int plot_w = kWidth - kMarginLeft - kMarginRight;
    const std::size_t ncat = categories.size();
    const std::size_t nser = std::max<std::size_t>(1, series.size());
    const double cat_w = static_cast<double>(plot_w) / std::max<std::size_t>(1, ncat);
    const double bar_w = cat_w * 0.8 / static_cast<double>(nser);

    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
      << kHeight << "'>\n";
    const Scale sx{0.0, static_cast<double>(ncat), kMarginLeft, kWidth - kMarginRight};
    axes(s, sx, sy, title, "", y_label);
    // category labels
    for (std::size_t c = 0; c < ncat; ++c) {
        const double px = kMarginLeft + cat_w * (c + 0.5);
        s << "<text x='" << num(px) << "' y='" << (kHeight - kMarginBottom + 18)
          << "' font-size='11' text-anchor='middle' font-family='sans-serif'>"
          << categories[c] << "</text>\n";
    }
    for (std::size_t sr = 0; sr < series.size(); ++sr) {
        const std::string color = kPalette[sr % kPaletteSize];
        for (std::size_t c = 0; c < series[sr].values.size() && c < ncat; ++c) {
            const double v = series[sr].values[c];
            const double x = kMarginLeft + cat_w * c + cat_w * 0.1 + bar_w * sr;
            const double y0 = sy(std::max(0.0, lo));
            const double y1 = sy(v);
            s << "<rect x='" << num(x) << "' y='" << num(std::min(y0, y1))
              << "' width='" << num(bar_w * 0.92) << "' height='"
              << num(std::abs(y0 - y1)) << "' fill='" << color << "'/>\n";
            if (c < series[sr].errors.size() && series[sr].errors[c] > 0.0) {
                const double cx = x + bar_w * 0.46;
                const double eyt = sy(v + series[sr].errors[c]);
                const double eyb = sy(v - series[sr].errors[c]);
                s << "<line x1='" << num(cx) << "' y1='" << num(eyt) << "' x2='"
                  << num(cx) << "' y2='" << num(eyb) << "' stroke='#222222'/>\n";
                s << "<line x1='" << num(cx - 4) << "' y1='" << num(eyt) << "' x2='"
                  << num(cx + 4) << "' y2='" << num(eyt) << "' stroke='#222222'/>\n";
                s << "<line x1='" << num(cx - 4) << "' y1='" << num(eyb) << "' x2='"
                  << num(cx + 4) << "' y2='" << num(eyb) << "' stroke='#222222'/>\n";
            }
        }
        legend_entry(s, static_cast<int>(sr), color, series[sr].name);
    }
    s << "</svg>\n";
    return s.str();
}

} // namespace handclust
