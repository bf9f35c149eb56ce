// Command-line front end. Talks to the library only through lrlab.h.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrlab.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kViolation = 3 };

struct Failure {
    int code;
    std::string message;
};

int exit_for(lrlab_status s) {
    switch (s) {
        case LRLAB_OK: return kOk;
        case LRLAB_ERR_VALIDATION: return kValidation;
        case LRLAB_ERR_BOUND_VIOLATION: return kViolation;
        case LRLAB_ERR_IO: return kValidation;
        default: return kNumerical;
    }
}

void check(lrlab_status s) {
    if (s != LRLAB_OK) throw Failure{exit_for(s), lrlab_last_error()};
}

std::string take(char* s) {
    std::string out = s ? s : "";
    lrlab_string_free(s);
    return out;
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<lrlab_config, Deleter<lrlab_config, lrlab_config_free>>;
using Ham = std::unique_ptr<lrlab_hamiltonian, Deleter<lrlab_hamiltonian, lrlab_hamiltonian_free>>;
using Cert = std::unique_ptr<lrlab_certificate, Deleter<lrlab_certificate, lrlab_certificate_free>>;
using Audit = std::unique_ptr<lrlab_audit, Deleter<lrlab_audit, lrlab_audit_free>>;
using Spread = std::unique_ptr<lrlab_spread, Deleter<lrlab_spread, lrlab_spread_free>>;

struct Options {
    std::string config;
    std::string out;
    std::optional<double> mu;
    bool optimize = false;
    std::optional<double> threshold;
    std::optional<int64_t> grid;
    std::optional<double> tol;
    std::optional<int64_t> seed;
    bool fixed_basis = false;
    std::string supp_a;
    std::string supp_b;
    std::optional<double> total_time;
    double t_final = 0.0;
    std::size_t source = 0;
    double at_time = 0.0;
};

Config make_config(const Options& o) {
    lrlab_config* raw = nullptr;
    check(o.config.empty() ? lrlab_config_default(&raw) : lrlab_config_load(o.config.c_str(), &raw));
    Config c(raw);
    if (o.mu) check(lrlab_config_set_double(c.get(), "mu", *o.mu));
    if (o.threshold) check(lrlab_config_set_double(c.get(), "threshold", *o.threshold));
    if (o.tol) check(lrlab_config_set_double(c.get(), "integrator_tol", *o.tol));
    if (o.grid) check(lrlab_config_set_int(c.get(), "grid_points", *o.grid));
    if (o.seed) check(lrlab_config_set_int(c.get(), "seed", *o.seed));
    if (o.optimize) check(lrlab_config_set_int(c.get(), "optimize", 1));
    if (o.fixed_basis) check(lrlab_config_set_int(c.get(), "fixed_basis", 1));
    if (!o.out.empty()) check(lrlab_config_set_string(c.get(), "output_dir", o.out.c_str()));
    return c;
}

double first_total_time(const lrlab_config* c, const Options& o) {
    if (o.total_time) return *o.total_time;
    const double* ts = nullptr;
    std::size_t n = 0;
    check(lrlab_config_t_values(c, &ts, &n));
    return ts[0];
}

Ham make_hamiltonian(const lrlab_config* c, const Options& o) {
    lrlab_hamiltonian* raw = nullptr;
    check(lrlab_hamiltonian_create(c, first_total_time(c, o), &raw));
    return Ham(raw);
}

std::size_t grid_points(const Options& o, std::size_t fallback) {
    return o.grid ? static_cast<std::size_t>(*o.grid) : fallback;
}

Cert make_certificate(const lrlab_hamiltonian* h, const Options& o, std::size_t points) {
    lrlab_certificate* raw = nullptr;
    if (o.mu && !o.optimize) {
        check(lrlab_certify(h, *o.mu, o.t_final, points, &raw));
    } else {
        check(lrlab_certify_optimal(h, 0.05, 5.0, o.t_final, points, &raw));
    }
    return Cert(raw);
}

std::vector<std::size_t> parse_labels(const std::string& text, const char* flag) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(item, &pos);
            if (pos != item.size() || v < 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw Failure{kValidation, std::string(flag) + ": '" + item + "' is not a label"};
        }
    }
    if (out.empty()) throw Failure{kValidation, std::string(flag) + " needs a comma-separated label list"};
    return out;
}

fs::path out_dir(const Options& o) { return o.out.empty() ? fs::path(".") : fs::path(o.out); }

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) throw Failure{kValidation, "cannot write " + path.string()};
}

std::string t_tag(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

int cmd_decompose(const Options& o) {
    const auto c = make_config(o);
    const auto h = make_hamiltonian(c.get(), o);
    char* raw = nullptr;
    check(lrlab_decompose(h.get(), o.at_time, o.mu.value_or(0.5), &raw));
    const auto text = take(raw);
    std::cout << text << '\n';
    if (!o.out.empty()) write_file(out_dir(o) / "decompose.json", text + "\n");
    return kOk;
}

int cmd_locality(const Options& o) {
    const auto c = make_config(o);
    const auto h = make_hamiltonian(c.get(), o);
    const auto cert = make_certificate(h.get(), o, grid_points(o, 2001));
    char* raw = nullptr;
    check(lrlab_certificate_json(cert.get(), &raw));
    const auto text = take(raw);
    std::cout << text << '\n';
    if (!o.out.empty()) write_file(out_dir(o) / "certificate.json", text + "\n");
    return kOk;
}

int cmd_bound_check(const Options& o) {
    const auto a = parse_labels(o.supp_a, "--supp-a");
    const auto b = parse_labels(o.supp_b, "--supp-b");
    const auto c = make_config(o);
    const auto h = make_hamiltonian(c.get(), o);
    const auto cert = make_certificate(h.get(), o, grid_points(o, 1001));
    lrlab_audit* raw = nullptr;
    check(lrlab_bound_audit(h.get(), cert.get(), a.data(), a.size(), b.data(), b.size(), 1e-9, &raw));
    const Audit audit(raw);
    char* csv = nullptr;
    char* summary = nullptr;
    check(lrlab_audit_csv(audit.get(), &csv));
    check(lrlab_audit_summary_json(audit.get(), &summary));
    const auto summary_text = take(summary);
    write_file(out_dir(o) / "audit.csv", take(csv));
    write_file(out_dir(o) / "audit_summary.json", summary_text + "\n");
    std::cout << summary_text << '\n';
    std::size_t violations = 0;
    check(lrlab_audit_result(audit.get(), &violations, nullptr));
    if (violations > 0) {
        std::cerr << "bound violated at " << violations << " time point(s)\n";
        return kViolation;
    }
    return kOk;
}

int cmd_spread(const Options& o) {
    const auto c = make_config(o);
    const auto h = make_hamiltonian(c.get(), o);
    const auto cert = make_certificate(h.get(), o, grid_points(o, 1001));
    lrlab_spread* raw = nullptr;
    check(lrlab_spread_compute(h.get(), cert.get(), o.source, o.tol.value_or(1e-9), 1e-9, &raw));
    const Spread spread(raw);
    char* csv = nullptr;
    char* svg = nullptr;
    check(lrlab_spread_csv(spread.get(), &csv));
    check(lrlab_spread_svg(spread.get(), &svg));
    write_file(out_dir(o) / "spread.csv", take(csv));
    write_file(out_dir(o) / "spread.svg", take(svg));
    std::size_t checked = 0, violations = 0;
    double margin = 0.0;
    check(lrlab_spread_result(spread.get(), &checked, &violations, &margin));
    nlohmann::json j{{"checked", checked}, {"violations", violations}, {"tol", 1e-9}};
    j["min_margin"] = std::isfinite(margin) ? nlohmann::json(margin) : nlohmann::json(nullptr);
    write_file(out_dir(o) / "spread_summary.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    if (violations > 0) {
        std::cerr << "propagator bound violated at " << violations << " point(s)\n";
        return kViolation;
    }
    return kOk;
}

int cmd_adiabatic(const Options& o) {
    const auto c = make_config(o);
    const double total_time = first_total_time(c.get(), o);
    char* raw = nullptr;
    check(lrlab_adiabatic_summary(c.get(), total_time, &raw));
    const auto text = take(raw);
    std::cout << text << '\n';
    if (!o.out.empty()) write_file(out_dir(o) / ("adiabatic_T" + t_tag(total_time) + ".json"), text + "\n");
    return kOk;
}

int cmd_fig1(const Options& o) {
    const auto c = make_config(o);
    char* raw = nullptr;
    check(lrlab_figure1(c.get(), &raw));
    const auto report = nlohmann::json::parse(take(raw));
    for (const auto& r : report["records"])
        std::cout << "T=" << r["T"].get<double>() << " v_lr=" << r["v_lr"] << " delta_ad=" << r["delta_ad"] << '\n';
    for (const auto& w : report["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
    for (const auto& f : report["failures"])
        std::cerr << "T=" << f["T"].get<double>() << " failed: " << f["message"].get<std::string>() << '\n';
    for (const auto& f : report["files"]) std::cout << "wrote " << f.get<std::string>() << '\n';
    return report["failures"].empty() ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Representation-locality Lieb-Robinson toolkit", "lrlab"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON config file");
        sub->add_option("--out", o.out, "Output directory");
        sub->add_option("--mu", o.mu, "Locality exponent");
        sub->add_flag("--optimize", o.optimize, "Minimize v_lr over mu");
        sub->add_option("--threshold", o.threshold, "Crossing threshold");
        sub->add_option("--grid", o.grid, "Number of grid points");
        sub->add_option("--tol", o.tol, "Integrator tolerance");
        sub->add_option("--seed", o.seed, "Seed for random models");
        sub->add_flag("--fixed-basis", o.fixed_basis, "Use the t = 0 eigenbasis for crossings");
        sub->add_option("--T", o.total_time, "Total time (defaults to the first configured T)");
        sub->add_option("--t-final", o.t_final, "Certificate horizon (0 = automatic)");
    };

    std::vector<std::pair<CLI::App*, int (*)(const Options&)>> commands;
    auto* decompose = app.add_subcommand("decompose", "Block decomposition statistics");
    add_common(decompose);
    decompose->add_option("--t", o.at_time, "Time at which to decompose H(t)");
    commands.emplace_back(decompose, cmd_decompose);

    auto* locality = app.add_subcommand("locality", "Locality certificate JSON");
    add_common(locality);
    commands.emplace_back(locality, cmd_locality);

    auto* bound = app.add_subcommand("bound-check", "Commutator bound audit");
    add_common(bound);
    bound->add_option("--supp-a", o.supp_a, "Labels of A, comma separated")->required();
    bound->add_option("--supp-b", o.supp_b, "Labels of B, comma separated")->required();
    commands.emplace_back(bound, cmd_bound_check);

    auto* spread = app.add_subcommand("spread", "Propagator spread CSV and SVG");
    add_common(spread);
    spread->add_option("--source", o.source, "Source label");
    commands.emplace_back(spread, cmd_spread);

    auto* adiabatic = app.add_subcommand("adiabatic", "Single-T adiabatic run summary");
    add_common(adiabatic);
    commands.emplace_back(adiabatic, cmd_adiabatic);

    auto* fig1 = app.add_subcommand("fig1", "Adiabatic error vs LR speed sweep");
    add_common(fig1);
    commands.emplace_back(fig1, cmd_fig1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kValidation;
    }

    try {
        for (auto& [sub, fn] : commands)
            if (sub->parsed()) return fn(o);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    std::cerr << app.help();
    return kValidation;
}
