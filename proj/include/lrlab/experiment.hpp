#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrlab/adiabatic.hpp"
#include "lrlab/hamiltonian.hpp"
#include "lrlab/propagation.hpp"

namespace lrlab {

/// Model description from a config file. Linear schedules take their total
/// time from the run (one per T value).
struct HamiltonianSpec {
    enum class Kind { paper_example, constant, linear, random_exp_local };
    Kind kind = Kind::paper_example;
    Matrix first;   // constant H, or H_i
    Matrix second;  // H_f
    ExpLocalSpec exp_local;

    TimeDependentHamiltonian build(double total_time) const;
};

struct ExperimentConfig {
    HamiltonianSpec hamiltonian;
    std::vector<double> t_values{12.5, 25.0, 50.0, 100.0, 200.0, 400.0};
    double threshold = 6e-4;
    std::optional<double> mu;
    bool optimize_mu = false;
    std::size_t grid_points = 2001;
    double integrator_tol = 1e-9;
    std::filesystem::path output_dir = ".";
    std::optional<std::uint64_t> seed;
    bool fixed_basis = false;

    /// Throws ValidationError on an empty/non-positive T list, a threshold
    /// outside (0, 1) or too few grid points.
    void validate() const;
};

/// Parses the JSON config schema. Unknown keys are ignored; missing keys keep
/// their defaults. Throws ValidationError on malformed input.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Row-major n x n matrix from [[re, im], ...] (flat) or [[[re, im], ...], ...]
/// (nested rows).
Matrix parse_matrix(const nlohmann::json& j);

struct LevelCrossing {
    std::size_t level;
    double time;
};

struct PairwiseSpeed {
    std::size_t from_level;
    std::size_t to_level;
    double speed;
};

struct EmpiricalVlr {
    double v_lr;  // least-squares slope of level index against crossing time
    std::vector<LevelCrossing> crossings;
    std::vector<PairwiseSpeed> pairwise;
};

/// For each level k >= 1, the first time |<E_k(t)|U(t,0)|G(0)>| exceeds the
/// threshold, linearly interpolated between grid points. With fixed_basis the
/// t = 0 eigenbasis replaces E_k(t). Throws InsufficientCrossingsError when
/// fewer than two levels cross.
EmpiricalVlr empirical_v_lr(const Propagator& u, const SpectralFlow& flow, double threshold, bool fixed_basis = false);
EmpiricalVlr empirical_v_lr(const TimeDependentHamiltonian& h, const TimeGrid& grid, double threshold,
                            const EvolveOptions& options, bool fixed_basis = false);

struct RunSummary {
    double total_time;
    double delta_ad;
    double gap_min;
    double eq8_ratio;
    double eq9_ratio;
    double eq11_ratio;
    double intertwining_defect;
    double mu;
    double v_lr_certificate;
    double h_norm_min;
    double h_norm_max;
    bool mixed_ground;
};

struct Figure1Record {
    double total_time;
    double v_lr_empirical;
    std::vector<PairwiseSpeed> v_lr_pairwise;
    std::vector<LevelCrossing> crossings;
    double delta_ad;
    double gap_min;
    double h_norm_min;
    double h_norm_max;
    RunSummary summary;
};

struct Figure1Failure {
    double total_time;
    std::string message;
};

struct Figure1Result {
    std::vector<Figure1Record> records;  // ascending T
    std::vector<Figure1Failure> failures;
    std::vector<std::string> warnings;
    std::vector<std::filesystem::path> files;
};

/// Full adiabatic pipeline for one total time: flow, U, U_ad, certificate,
/// condition report and empirical LR speed.
Figure1Record run_figure1_point(const ExperimentConfig& config, double total_time);

/// Runs every T (worker pool capped by LRLAB_THREADS), writes fig1.csv, the
/// two log-log SVG plots and one JSON summary per run into output_dir.
Figure1Result reproduce_figure1(const ExperimentConfig& config);

/// Single-T run summary used by the `adiabatic` subcommand.
RunSummary adiabatic_summary(const ExperimentConfig& config, double total_time);

std::size_t worker_count(std::size_t tasks);

}  // namespace lrlab
