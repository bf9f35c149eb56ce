#include "lrlab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lrlab {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
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

struct Axis {
    bool log;
    double lo = 0.0, hi = 1.0;  // in transformed units

    double tf(double v) const { return log ? std::log10(v) : v; }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

    void fit(const std::vector<double>& vals) {
        bool any = false;
        double mn = 0.0, mx = 0.0;
        for (double v : vals) {
            if (!usable(v)) continue;
            const double t = tf(v);
            if (!any) { mn = mx = t; any = true; }
            mn = std::min(mn, t);
            mx = std::max(mx, t);
        }
        if (!any) { mn = 0.0; mx = 1.0; }
        if (mx - mn < 1e-12) { mn -= 0.5; mx += 0.5; }
        const double pad = 0.05 * (mx - mn);
        lo = mn - pad;
        hi = mx + pad;
        if (log) { lo = std::floor(lo * 4.0) / 4.0; hi = std::ceil(hi * 4.0) / 4.0; }
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::ceil(lo); e <= hi + 1e-9; e += 1.0) out.push_back(e);
            if (out.size() >= 2) return out;
            out.clear();
        }
        for (int k = 0; k <= 4; ++k) out.push_back(lo + (hi - lo) * k / 4.0);
        return out;
    }

    std::string label_at(double t) const { return tick_label(log ? std::pow(10.0, t) : t); }
};

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    const double left = 80, right = 20, top = 40, bottom = 60;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;

    Axis ax{spec.log_x}, ay{spec.log_y};
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    ax.fit(xs);
    ay.fit(ys);
    auto px = [&](double v) { return left + (ax.tf(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double v) { return top + ph - (ay.tf(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape(spec.title) << "</text>\n";
    o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ax.ticks()) {
        const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
        o << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(x) << "\" y2=\""
          << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + ph + 20)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << ax.label_at(t)
          << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
        o << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(y)
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << ay.label_at(t) << "</text>\n";
    }
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(spec.height - 15.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << escape(spec.x_label)
      << "</text>\n";
    o << "<text transform=\"translate(20," << fmt(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(spec.y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        std::string pts;
        const std::size_t n = std::min(ser.x.size(), ser.y.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!ax.usable(ser.x[k]) || !ay.usable(ser.y[k])) continue;
            if (!pts.empty()) pts += ' ';
            pts += fmt(px(ser.x[k])) + "," + fmt(py(ser.y[k]));
        }
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        if (ser.markers) {
            for (std::size_t k = 0; k < n; ++k) {
                if (!ax.usable(ser.x[k]) || !ay.usable(ser.y[k])) continue;
                o << "<circle cx=\"" << fmt(px(ser.x[k])) << "\" cy=\"" << fmt(py(ser.y[k])) << "\" r=\"3\" fill=\""
                  << color << "\"/>\n";
            }
        }
        if (!ser.label.empty()) {
            const double ly = top + 16 + 16 * static_cast<double>(s);
            o << "<text x=\"" << fmt(left + pw - 8) << "\" y=\"" << fmt(ly)
              << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
              << escape(ser.label) << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace lrlab
