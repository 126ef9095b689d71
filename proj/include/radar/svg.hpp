#pragma once

#include <string>
#include <vector>

namespace radar::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color{"#1f77b4"};
    bool markers{false};  // scatter instead of polyline
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    int width{720};
    int height{420};
};

/// Static line/scatter chart with linear axes and "nice" tick spacing.
std::string render(const Chart& chart);

}  // namespace radar::svg
