#pragma once

#include <string>
#include <vector>

namespace lrlab {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = true;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 640;
    int height = 480;
};

/// Static line plot. Output bytes depend only on the inputs. Points that
/// cannot be shown on a log axis (<= 0, non-finite) are dropped.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace lrlab
