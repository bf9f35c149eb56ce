#pragma once

#include <vector>

#include "lrlab/hamiltonian.hpp"
#include "lrlab/locality.hpp"
#include "lrlab/numerics.hpp"
#include "lrlab/propagation.hpp"

namespace lrlab {

inline constexpr double kDefaultClusterTol = 1e-8;

/// Eigen-data of H(t) along a grid. Eigenvectors are phase-aligned with the
/// previous grid point (first point: largest component real positive).
struct SpectralFlow {
    TimeGrid grid;
    std::vector<RealVector> eigenvalues;
    std::vector<Matrix> eigenvectors;
    std::vector<Matrix> ground_projector;  // G(t)
    std::vector<double> gap;               // Δ(t)
    double gap_min = 0.0;
    std::size_t ground_dim = 0;
    double min_overlap = 1.0;  // min over k, j of |<E_k(t_{j+1})|E_k(t_j)>|
};

/// The ground cluster holds every eigenvalue within cluster_tol of the lowest.
/// Throws LevelCrossingError if its size changes along the grid and
/// GapClosureError if nothing lies above it.
SpectralFlow spectral_flow(const TimeDependentHamiltonian& h, const TimeGrid& grid,
                           double cluster_tol = kDefaultClusterTol);

/// Ġ from first-order perturbation theory. Throws NumericalError when the gap
/// at t is below 1e-8.
Matrix ground_projector_derivative(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim);

/// H(t) + i[Ġ(t), G(t)].
Matrix h_ad(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim);

struct AdiabaticPropagator {
    Propagator u_ad;
    double intertwining_defect;  // max_t ‖U_ad G(0) U_ad† - G(t)‖
};

/// Propagator of H_ad on the flow grid. Throws NumericalError when the
/// intertwining defect exceeds 10 tol.
AdiabaticPropagator evolve_adiabatic(const TimeDependentHamiltonian& h, const SpectralFlow& flow,
                                     const EvolveOptions& options);

double intertwining_defect(const Propagator& u_ad, const SpectralFlow& flow);

/// Running ∫_0^{t_k} ‖H - H_ad‖ by composite Simpson with one midpoint
/// evaluation per grid interval.
std::vector<double> hdiff_running_integral(const TimeDependentHamiltonian& h, const TimeGrid& grid,
                                           std::size_t ground_dim);

/// U_ad† (H - H_ad) U_ad at time t.
Matrix kernel_k(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim, const Matrix& u_ad);

struct WaveOperatorErrors {
    std::vector<double> delta;  // ‖1 - U_ad† U‖ per grid point
    double delta_ad_final;
    bool mixed_ground;  // ground_dim > 1: 1 - tr[G(T) ρ(T)] from the maximally mixed ground state
};

WaveOperatorErrors wave_operator_errors(const Propagator& u, const Propagator& u_ad, const SpectralFlow& flow);

/// H - H_ad in the instantaneous eigenbasis (ascending eigenvalue order).
Matrix hdiff_in_eigenbasis(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim);

/// Σ over pairwise eigenbasis blocks meeting the ground labels of
/// ‖(H - H_ad)_Z‖ e^{mu diam Z}, divided by |G|.
double instantaneous_locality(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim, double mu);

struct ConditionReport {
    double gap_min;
    std::size_t ground_dim;
    double mu;
    double eq8_ratio;   // max_t ‖H - H_ad‖ / Δ_min
    double eq9_ratio;   // max_t ‖Ḣ‖ / Δ_min²
    double eq11_ratio;  // V_LR^m / Δ_min
    double eq12_block_sum;  // max_t Σ_{Z ∩ G ≠ ∅} ‖(H - H_ad)_Z‖ / (mu |G| Δ_min)
    double eq12_norm;       // max_t ‖H - H_ad‖ / (mu |G| Δ_min)
    double epsilon_tilde;   // taken as eq11_ratio
    double epsilon;         // |G| mu epsilon_tilde
    std::vector<double> hdiff_norm;     // ‖H - H_ad‖ per grid point
    std::vector<double> hdot_over_gap;  // ‖Ḣ‖ / Δ_min per grid point
    std::vector<double> block_sum;      // Σ_{Z ∩ G ≠ ∅} ‖(H - H_ad)_Z‖ per grid point
    std::size_t norm_inequality_violations = 0;  // ‖H - H_ad‖ > ‖Ḣ‖/Δ_min + 1e-9
    std::size_t block_sum_violations = 0;        // block_sum < ‖H - H_ad‖ - 1e-9
};

ConditionReport condition_report(const TimeDependentHamiltonian& h, const SpectralFlow& flow,
                                 const LocalityCertificate& certificate);

struct AdiabaticRun {
    SpectralFlow flow;
    Propagator u;
    Propagator u_ad;
    std::vector<double> delta;
    double delta_ad_final;
    double intertwining_defect;
    bool mixed_ground;
};

/// Flow, U, U_ad and the wave-operator errors on one grid.
AdiabaticRun run_adiabatic(const TimeDependentHamiltonian& h, const TimeGrid& grid, const EvolveOptions& options,
                           double cluster_tol = kDefaultClusterTol);

}  // namespace lrlab
