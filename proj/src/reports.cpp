#include "lrlab/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lrlab/errors.hpp"
#include "lrlab/svg_plot.hpp"

namespace lrlab {

using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// JSON has no infinities; emit null instead.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const LocalityCertificate& c) {
    json samples = json::array();
    for (double a : c.a_mu_samples) samples.push_back(num(a));
    return json{{"mu", c.mu},
                {"a_mu_max", num(c.a_mu_max)},
                {"a_mu_timeavg", num(c.a_mu_timeavg)},
                {"v_lr", num(c.v_lr)},
                {"grid", c.grid.points()},
                {"a_mu", std::move(samples)}};
}

json to_json(const RunSummary& s) {
    return json{{"T", s.total_time},
                {"delta_ad", num(s.delta_ad)},
                {"gap_min", num(s.gap_min)},
                {"eq8_ratio", num(s.eq8_ratio)},
                {"eq9_ratio", num(s.eq9_ratio)},
                {"eq11_ratio", num(s.eq11_ratio)},
                {"intertwining_defect", num(s.intertwining_defect)},
                {"mu", num(s.mu)},
                {"v_lr_certificate", num(s.v_lr_certificate)},
                {"h_norm_min", num(s.h_norm_min)},
                {"h_norm_max", num(s.h_norm_max)},
                {"mixed_ground", s.mixed_ground}};
}

json to_json(const Figure1Record& r) {
    json j = to_json(r.summary);
    j["v_lr"] = num(r.v_lr_empirical);
    json crossings = json::array();
    for (const auto& c : r.crossings) crossings.push_back({{"level", c.level}, {"t", c.time}});
    j["crossings"] = std::move(crossings);
    json pairwise = json::array();
    for (const auto& p : r.v_lr_pairwise)
        pairwise.push_back({{"from", p.from_level}, {"to", p.to_level}, {"speed", num(p.speed)}});
    j["v_lr_pairwise"] = std::move(pairwise);
    return j;
}

json decomposition_stats(const BlockDecomposition& d, double mu) {
    std::size_t singles = 0, pairs = 0, max_diam = 0;
    double norm_sum = 0.0;
    for (const auto& t : d.terms) {
        (t.block.size() == 1 ? singles : pairs) += 1;
        max_diam = std::max(max_diam, t.block.diameter());
        norm_sum += t.norm;
    }
    const auto sums = level_sums(d, mu);
    return json{{"dimension", d.dimension},
                {"terms", d.terms.size()},
                {"singletons", singles},
                {"pairs", pairs},
                {"max_diameter", max_diam},
                {"norm_sum", norm_sum},
                {"mu", mu},
                {"level_sums", sums},
                {"a_mu", a_mu_pointwise(d, mu)}};
}

std::string audit_csv(const AuditReport& r) {
    std::ostringstream o;
    o << "t,lhs,rhs,margin\n";
    for (std::size_t k = 0; k < r.times.size(); ++k)
        o << format_number(r.times[k]) << ',' << format_number(r.lhs[k]) << ',' << format_number(r.rhs[k]) << ','
          << format_number(r.margin[k]) << '\n';
    return o.str();
}

json audit_summary(const AuditReport& r) {
    return json{{"violations", r.violations}, {"min_margin", num(r.min_margin)}, {"tol", r.violation_tol}};
}

std::string spread_csv(const SpreadReport& s, const LocalityCertificate& c) {
    if (c.grid.size() != s.grid.size()) throw ValidationError("spread_csv: certificate grid differs from the spread grid");
    const auto avg = c.running_timeavg();
    std::ostringstream o;
    o << "t,j,amplitude,bound\n";
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        const double t = s.grid[k];
        for (Eigen::Index j = 0; j < s.amplitudes[k].size(); ++j) {
            const double d = std::abs(static_cast<double>(j) - static_cast<double>(s.source));
            const double bound = std::exp(-c.mu * d) * std::expm1(avg[k] * t);
            o << format_number(t) << ',' << j << ',' << format_number(s.amplitudes[k](j)) << ','
              << format_number(bound) << '\n';
        }
    }
    return o.str();
}

std::string spread_svg(const SpreadReport& s) {
    std::vector<PlotSeries> series;
    if (s.amplitudes.empty()) return render_svg({"Propagator spread", "t", "|U_ji|", false, true}, series);
    const auto n = s.amplitudes.front().size();
    for (Eigen::Index j = 0; j < n; ++j) {
        PlotSeries ser{"j=" + std::to_string(j), {}, {}, false};
        for (std::size_t k = 0; k < s.grid.size(); ++k) {
            ser.x.push_back(s.grid[k]);
            ser.y.push_back(s.amplitudes[k](j));
        }
        series.push_back(std::move(ser));
    }
    return render_svg({"Propagator spread from label " + std::to_string(s.source), "t", "|U_ji|", false, true},
                      series);
}

std::string fig1_csv(const std::vector<Figure1Record>& records) {
    std::ostringstream o;
    o << "T,v_lr,delta_ad,gap_min,h_norm_min,h_norm_max\n";
    for (const auto& r : records)
        o << format_number(r.total_time) << ',' << format_number(r.v_lr_empirical) << ','
          << format_number(r.delta_ad) << ',' << format_number(r.gap_min) << ',' << format_number(r.h_norm_min)
          << ',' << format_number(r.h_norm_max) << '\n';
    return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace lrlab
