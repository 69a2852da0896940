#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bsnet::io {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;  // plot log10(y); non-positive samples are dropped
    int width = 720;
    int height = 440;
};

/// Static polyline plot with axes, ticks and a legend.
std::string render_svg(const PlotSpec& spec, const std::vector<Series>& series);
void write_svg(const std::filesystem::path& path, const PlotSpec& spec,
               const std::vector<Series>& series);

} // namespace bsnet::io
