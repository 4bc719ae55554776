#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tipping::svg {

struct Series {
    std::string label;
    std::vector<double> x, y;
    std::string color = "black";
    bool dashed = false;
};

struct Marker {
    double x = 0;
    std::string label;
    std::string color = "steelblue";
};

struct LineChart {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    std::vector<Marker> vertical_lines;
};

struct Bar {
    std::string label;
    double value = 0;
    std::string annotation;  // drawn above/below the bar, e.g. significance stars
};

struct BarChart {
    std::string title, y_label;
    std::vector<Bar> bars;
    double y_min = -1, y_max = 1;
};

// The first line after the XML declaration is a version comment.
void write_line_chart(std::ostream& out, const LineChart& chart);
void write_bar_chart(std::ostream& out, const BarChart& chart);

} // namespace tipping::svg
