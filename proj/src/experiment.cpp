#include "lrlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "lrlab/errors.hpp"
#include "lrlab/locality.hpp"
#include "lrlab/reports.hpp"
#include "lrlab/svg_plot.hpp"

namespace lrlab {

using nlohmann::json;

TimeDependentHamiltonian HamiltonianSpec::build(double total_time) const {
    switch (kind) {
        case Kind::paper_example: return build_eleven_level_example(total_time);
        case Kind::constant: return TimeDependentHamiltonian::constant(first);
        case Kind::linear: return TimeDependentHamiltonian::linear(first, second, total_time);
        case Kind::random_exp_local: return TimeDependentHamiltonian::constant(random_exp_local(exp_local));
    }
    throw ValidationError("unknown Hamiltonian kind");
}

void ExperimentConfig::validate() const {
    if (t_values.empty()) throw ValidationError("config: T_values must not be empty");
    for (double t : t_values)
        if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("config: every T value must be positive");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("config: threshold must lie in (0, 1)");
    if (grid_points < 3) throw ValidationError("config: grid_points must be at least 3");
    if (!(integrator_tol > 0.0)) throw ValidationError("config: integrator_tol must be positive");
    if (mu && !(*mu > 0.0)) throw ValidationError("config: mu must be positive");
}

Matrix parse_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix must be a nonempty array");
    auto entry = [](const json& e) -> Complex {
        if (e.is_number()) return {e.get<double>(), 0.0};
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ValidationError("matrix entries must be [re, im] pairs");
        return {e[0].get<double>(), e[1].get<double>()};
    };
    const bool nested = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
    if (nested) {
        const auto n = static_cast<Eigen::Index>(j.size());
        Matrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto& row = j[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw ValidationError("matrix rows must all have length n");
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = entry(row[static_cast<std::size_t>(c)]);
        }
        return m;
    }
    const auto count = j.size();
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
    if (static_cast<std::size_t>(n * n) != count) throw ValidationError("flat matrix must hold n*n entries");
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = entry(j[static_cast<std::size_t>(r * n + c)]);
    return m;
}

namespace {

HamiltonianSpec parse_hamiltonian(const json& j, std::optional<std::uint64_t> seed) {
    HamiltonianSpec spec;
    std::string type;
    if (j.is_string()) {
        type = j.get<std::string>();
    } else if (j.is_object()) {
        if (!j.contains("type") || !j["type"].is_string()) throw ValidationError("hamiltonian.type missing");
        type = j["type"].get<std::string>();
    } else {
        throw ValidationError("hamiltonian must be a string or an object");
    }
    if (type == "paper_example") {
        spec.kind = HamiltonianSpec::Kind::paper_example;
    } else if (type == "constant") {
        spec.kind = HamiltonianSpec::Kind::constant;
        if (!j.contains("matrix")) throw ValidationError("constant hamiltonian needs 'matrix'");
        spec.first = parse_matrix(j["matrix"]);
    } else if (type == "linear") {
        spec.kind = HamiltonianSpec::Kind::linear;
        if (!j.contains("H_i") || !j.contains("H_f")) throw ValidationError("linear hamiltonian needs 'H_i' and 'H_f'");
        spec.first = parse_matrix(j["H_i"]);
        spec.second = parse_matrix(j["H_f"]);
    } else if (type == "random_exp_local") {
        spec.kind = HamiltonianSpec::Kind::random_exp_local;
        spec.exp_local.dimension = j.value("dimension", std::size_t{8});
        spec.exp_local.amplitude = j.value("h", 1.0);
        spec.exp_local.decay_rate = j.value("mu_prime", 1.0);
        spec.exp_local.seed = j.value("seed", seed.value_or(0));
    } else {
        throw ValidationError("unknown hamiltonian type '" + type + "'");
    }
    if (spec.kind == HamiltonianSpec::Kind::constant || spec.kind == HamiltonianSpec::Kind::linear) {
        const auto dim = j.value("dimension", static_cast<std::size_t>(spec.first.rows()));
        if (dim != static_cast<std::size_t>(spec.first.rows()))
            throw ValidationError("hamiltonian.dimension does not match the matrix");
    }
    return spec;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    ExperimentConfig c;
    try {
        if (j.contains("seed") && !j["seed"].is_null()) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("hamiltonian")) c.hamiltonian = parse_hamiltonian(j["hamiltonian"], c.seed);
        if (j.contains("T_values")) c.t_values = j["T_values"].get<std::vector<double>>();
        c.threshold = j.value("threshold", c.threshold);
        if (j.contains("mu") && !j["mu"].is_null()) c.mu = j["mu"].get<double>();
        c.optimize_mu = j.value("optimize", c.optimize_mu);
        c.grid_points = j.value("grid_points", c.grid_points);
        c.integrator_tol = j.value("integrator_tol", c.integrator_tol);
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        c.fixed_basis = j.value("fixed_basis", c.fixed_basis);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError("config " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

EmpiricalVlr empirical_v_lr(const Propagator& u, const SpectralFlow& flow, double threshold, bool fixed_basis) {
    if (!(threshold > 0.0)) throw ValidationError("empirical_v_lr: threshold must be positive");
    if (u.size() != flow.grid.size()) throw ValidationError("empirical_v_lr: propagator and flow grids differ");
    const Vector psi0 = flow.eigenvectors.front().col(0);
    const auto n = psi0.size();
    const std::size_t m = u.size();

    // amplitude[k](l) = |<E_l|U(t_k)|G(0)>|
    std::vector<RealVector> amp(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Matrix& basis = fixed_basis ? flow.eigenvectors.front() : flow.eigenvectors[k];
        amp[k] = (basis.adjoint() * (u[k] * psi0)).cwiseAbs();
    }

    EmpiricalVlr out{};
    for (Eigen::Index level = 1; level < n; ++level) {
        for (std::size_t k = 0; k < m; ++k) {
            if (!(amp[k](level) > threshold)) continue;
            double t = flow.grid[k];
            if (k > 0) {
                const double a0 = amp[k - 1](level), a1 = amp[k](level);
                const double t0 = flow.grid[k - 1], t1 = flow.grid[k];
                t = t0 + (threshold - a0) / (a1 - a0) * (t1 - t0);
            }
            out.crossings.push_back({static_cast<std::size_t>(level), t});
            break;
        }
    }
    if (out.crossings.size() < 2) {
        std::ostringstream msg;
        msg << "only " << out.crossings.size() << " level(s) crossed the threshold " << threshold;
        for (const auto& c : out.crossings) msg << "; level " << c.level << " at t = " << c.time;
        throw InsufficientCrossingsError(msg.str());
    }

    const double count = static_cast<double>(out.crossings.size());
    double tbar = 0.0, lbar = 0.0;
    for (const auto& c : out.crossings) {
        tbar += c.time;
        lbar += static_cast<double>(c.level);
    }
    tbar /= count;
    lbar /= count;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& c : out.crossings) {
        sxy += (c.time - tbar) * (static_cast<double>(c.level) - lbar);
        sxx += (c.time - tbar) * (c.time - tbar);
    }
    if (!(sxx > 0.0)) throw NumericalError("empirical_v_lr: all crossing times coincide");
    out.v_lr = sxy / sxx;

    for (std::size_t a = 0; a < out.crossings.size(); ++a) {
        for (std::size_t b = a + 1; b < out.crossings.size(); ++b) {
            const double dt = out.crossings[b].time - out.crossings[a].time;
            if (dt == 0.0) continue;
            const double dl = static_cast<double>(out.crossings[b].level) - static_cast<double>(out.crossings[a].level);
            out.pairwise.push_back({out.crossings[a].level, out.crossings[b].level, dl / dt});
        }
    }
    return out;
}

EmpiricalVlr empirical_v_lr(const TimeDependentHamiltonian& h, const TimeGrid& grid, double threshold,
                            const EvolveOptions& options, bool fixed_basis) {
    const auto flow = spectral_flow(h, grid);
    const auto u = evolve(h, grid, options);
    return empirical_v_lr(u, flow, threshold, fixed_basis);
}

namespace {

struct PipelineOutput {
    AdiabaticRun run;
    RunSummary summary;
};

PipelineOutput run_pipeline(const ExperimentConfig& config, double total_time) {
    const auto h = config.hamiltonian.build(total_time);
    const auto grid = TimeGrid::uniform(total_time, config.grid_points);
    EvolveOptions opts;
    opts.tol = config.integrator_tol;
    auto run = run_adiabatic(h, grid, opts);

    const LocalityProfile profile(h, grid, Permutation::identity(h.dimension()));
    const auto certificate = (config.mu && !config.optimize_mu) ? profile.certify(*config.mu)
                                                                : optimize_mu_generic(profile, 0.05, 5.0).certificate;
    const auto report = condition_report(h, run.flow, certificate);

    double nmin = INFINITY, nmax = 0.0;
    for (const auto& ev : run.flow.eigenvalues) {
        const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
        nmin = std::min(nmin, norm);
        nmax = std::max(nmax, norm);
    }
    RunSummary s{total_time,       run.delta_ad_final, run.flow.gap_min,       report.eq8_ratio,
                 report.eq9_ratio, report.eq11_ratio,  run.intertwining_defect, certificate.mu,
                 certificate.v_lr, nmin,               nmax,                    run.mixed_ground};
    return {std::move(run), s};
}

std::string t_tag(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

}  // namespace

RunSummary adiabatic_summary(const ExperimentConfig& config, double total_time) {
    return run_pipeline(config, total_time).summary;
}

Figure1Record run_figure1_point(const ExperimentConfig& config, double total_time) {
    auto out = run_pipeline(config, total_time);
    auto vlr = empirical_v_lr(out.run.u, out.run.flow, config.threshold, config.fixed_basis);
    return Figure1Record{total_time,        vlr.v_lr,           std::move(vlr.pairwise),
                         std::move(vlr.crossings), out.summary.delta_ad, out.summary.gap_min,
                         out.summary.h_norm_min,  out.summary.h_norm_max, out.summary};
}

std::size_t worker_count(std::size_t tasks) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LRLAB_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, std::min(n, tasks));
}

Figure1Result reproduce_figure1(const ExperimentConfig& config) {
    config.validate();
    std::vector<double> ts = config.t_values;
    std::sort(ts.begin(), ts.end());

    std::vector<std::optional<Figure1Record>> slots(ts.size());
    std::vector<std::string> errors(ts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ts.size(); i = next++) {
            try {
                slots[i] = run_figure1_point(config, ts[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t nthreads = worker_count(ts.size());
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    }

    Figure1Result result;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (slots[i]) {
            result.records.push_back(std::move(*slots[i]));
        } else {
            result.failures.push_back({ts[i], errors[i]});
        }
    }
    for (const auto& r : result.records) {
        if (r.gap_min < 0.095 || r.gap_min > 0.105)
            result.warnings.push_back("T = " + t_tag(r.total_time) + ": gap_min " + format_number(r.gap_min) +
                                      " outside [0.095, 0.105]");
        if (r.h_norm_min < 0.95 || r.h_norm_max > 1.85)
            result.warnings.push_back("T = " + t_tag(r.total_time) + ": ||H(t)|| range [" +
                                      format_number(r.h_norm_min) + ", " + format_number(r.h_norm_max) +
                                      "] outside [0.95, 1.85]");
    }

    std::filesystem::create_directories(config.output_dir);
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = config.output_dir / name;
        write_text(path, content);
        result.files.push_back(path);
    };
    emit("fig1.csv", fig1_csv(result.records));

    PlotSeries dad_vs_vlr{"delta_ad", {}, {}};
    PlotSeries vlr_vs_t{"V_LR", {}, {}};
    for (const auto& r : result.records) {
        dad_vs_vlr.x.push_back(r.v_lr_empirical);
        dad_vs_vlr.y.push_back(r.delta_ad);
        vlr_vs_t.x.push_back(r.total_time);
        vlr_vs_t.y.push_back(r.v_lr_empirical);
    }
    // Plot in ascending x so the polyline does not fold back.
    {
        std::vector<std::size_t> idx(dad_vs_vlr.x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return dad_vs_vlr.x[a] < dad_vs_vlr.x[b]; });
        PlotSeries sorted{"delta_ad", {}, {}};
        for (auto k : idx) {
            sorted.x.push_back(dad_vs_vlr.x[k]);
            sorted.y.push_back(dad_vs_vlr.y[k]);
        }
        dad_vs_vlr = std::move(sorted);
    }
    emit("fig1_dad_vs_vlr.svg",
         render_svg({"Adiabatic error vs LR speed", "V_LR", "delta_ad", true, true}, {dad_vs_vlr}));
    emit("fig1_vlr_vs_T.svg", render_svg({"LR speed vs total time", "T", "V_LR", true, true}, {vlr_vs_t}));
    for (const auto& r : result.records) emit("run_T" + t_tag(r.total_time) + ".json", to_json(r).dump(2) + "\n");
    return result;
}

}  // namespace lrlab
