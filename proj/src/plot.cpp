#include "tipping/plot.hpp"

#include "tipping/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace tipping::svg {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

void header(std::ostream& out, const std::string& title) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- tipping " << kVersion << " -->\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n";
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const {
        return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
    }
};

void axes(std::ostream& out, const Frame& f, const std::string& x_label,
          const std::string& y_label, bool x_ticks) {
    out << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kHeight - kBottom) << "\" x2=\""
        << fmt(kWidth - kRight) << "\" y2=\"" << fmt(kHeight - kBottom) << "\"/>\n"
        << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(kHeight - kBottom) << "\"/>\n</g>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = f.y0 + (f.y1 - f.y0) * i / 4;
        out << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(f.py(y) + 4)
            << "\" text-anchor=\"end\">" << tick(y) << "</text>\n";
        if (x_ticks) {
            const double x = f.x0 + (f.x1 - f.x0) * i / 4;
            out << "<text x=\"" << fmt(f.px(x)) << "\" y=\"" << fmt(kHeight - kBottom + 16)
                << "\" text-anchor=\"middle\">" << tick(x) << "</text>\n";
        }
    }
    out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight - 15)
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n"
        << "<text transform=\"translate(18," << fmt(kHeight / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

} // namespace

void write_line_chart(std::ostream& out, const LineChart& chart) {
    Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            f.x0 = std::min(f.x0, s.x[i]);
            f.x1 = std::max(f.x1, s.x[i]);
            f.y0 = std::min(f.y0, s.y[i]);
            f.y1 = std::max(f.y1, s.y[i]);
        }
    }
    if (!(f.x0 < f.x1)) { f.x0 = 0; f.x1 = 1; }
    if (!(f.y0 < f.y1)) { f.y0 -= 0.5; f.y1 += 0.5; }
    const double pad = 0.05 * (f.y1 - f.y0);
    f.y0 -= pad;
    f.y1 += pad;

    header(out, chart.title);
    axes(out, f, chart.x_label, chart.y_label, true);
    for (const auto& s : chart.series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << fmt(f.px(s.x[i])) << ',' << fmt(f.py(s.y[i])) << ' ';
        }
        out << "\"/>\n";
    }
    for (const auto& m : chart.vertical_lines) {
        if (!std::isfinite(m.x)) continue;
        out << "<line x1=\"" << fmt(f.px(m.x)) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
            << fmt(f.px(m.x)) << "\" y2=\"" << fmt(kHeight - kBottom) << "\" stroke=\"" << m.color
            << "\" stroke-dasharray=\"2,3\"/>\n"
            << "<text x=\"" << fmt(f.px(m.x) + 4) << "\" y=\"" << fmt(kTop + 12) << "\" fill=\""
            << m.color << "\">" << escape(m.label) << "</text>\n";
    }
    double legend_y = kTop + 8;
    for (const auto& s : chart.series) {
        const double x = kWidth - kRight - 150;
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(legend_y) << "\" x2=\"" << fmt(x + 24)
            << "\" y2=\"" << fmt(legend_y) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
            << "<text x=\"" << fmt(x + 30) << "\" y=\"" << fmt(legend_y + 4) << "\">"
            << escape(s.label) << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

void write_bar_chart(std::ostream& out, const BarChart& chart) {
    const Frame f{0, std::max<double>(1, static_cast<double>(chart.bars.size())), chart.y_min,
                  chart.y_max};
    header(out, chart.title);
    axes(out, f, "", chart.y_label, false);
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(f.py(0)) << "\" x2=\""
        << fmt(kWidth - kRight) << "\" y2=\"" << fmt(f.py(0)) << "\" stroke=\"gray\"/>\n";
    for (std::size_t i = 0; i < chart.bars.size(); ++i) {
        const auto& b = chart.bars[i];
        const double v = std::isfinite(b.value) ? std::clamp(b.value, f.y0, f.y1) : 0.0;
        const double left = f.px(static_cast<double>(i) + 0.2);
        const double right = f.px(static_cast<double>(i) + 0.8);
        const double top = std::min(f.py(v), f.py(0));
        const double height = std::abs(f.py(v) - f.py(0));
        out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\""
            << fmt(right - left) << "\" height=\"" << fmt(height) << "\" fill=\"steelblue\"/>\n";
        const double mid = 0.5 * (left + right);
        out << "<text x=\"" << fmt(mid) << "\" y=\"" << fmt(kHeight - kBottom + 16)
            << "\" text-anchor=\"middle\">" << escape(b.label) << "</text>\n";
        if (!b.annotation.empty()) {
            const double y = v >= 0 ? top - 4 : top + height + 14;
            out << "<text x=\"" << fmt(mid) << "\" y=\"" << fmt(y) << "\" text-anchor=\"middle\">"
                << escape(b.annotation) << "</text>\n";
        }
    }
    out << "</svg>\n";
}

} // namespace tipping::svg
