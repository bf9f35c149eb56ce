#pragma once

#include <utility>
#include <vector>

#include "lrlab/basis_blocks.hpp"
#include "lrlab/hamiltonian.hpp"
#include "lrlab/numerics.hpp"

namespace lrlab {

/// Per-level weighted block sums Σ_{Z ∋ i} |Z| ‖H_Z‖ e^{mu diam Z}.
std::vector<double> level_sums(const BlockDecomposition& decomp, double mu);

/// Smallest a with Σ_{Z ∋ i} |Z| ‖H_Z‖ e^{mu diam Z} <= a for every level i.
double a_mu_pointwise(const BlockDecomposition& decomp, double mu);

/// Σ_{Z ∩ P ≠ ∅} |Z| ‖H_Z‖ e^{mu diam Z}.
double probe_block_sum(const BlockDecomposition& decomp, double mu, const Block& probe);

/// Entry k is true iff probe_block_sum(probes[k]) <= |probes[k]| a.
std::vector<bool> check_condition_eq1(const BlockDecomposition& decomp, double mu, double a,
                                      const std::vector<Block>& probes);

/// All contiguous probes of size 1..max_size inside 0..dimension-1, followed
/// by `random_count` random subsets drawn from `seed`.
std::vector<Block> default_probes(std::size_t dimension, std::size_t max_size, std::size_t random_count,
                                  std::uint64_t seed);

struct LocalityCertificate {
    double mu;
    TimeGrid grid;
    std::vector<double> a_mu_samples;
    double a_mu_max;      // sup over the grid
    double a_mu_timeavg;  // trapezoidal time average over the whole grid
    double v_lr;          // a_mu_timeavg / mu
    double v_lr_max;      // a_mu_max / mu
    Permutation basis_permutation;

    /// ⟨a_mu⟩ over [0, t_k] for every grid point.
    std::vector<double> running_timeavg() const;
};

/// Pairwise block decompositions of H(t) along a grid, in a fixed (possibly
/// permuted) basis. Certificates for different mu reuse the decompositions.
class LocalityProfile {
public:
    LocalityProfile(const TimeDependentHamiltonian& h, const TimeGrid& grid, Permutation permutation);

    LocalityCertificate certify(double mu) const;
    const TimeGrid& grid() const noexcept { return grid_; }
    const BlockDecomposition& decomposition(std::size_t k) const;

private:
    TimeGrid grid_;
    Permutation permutation_;
    std::vector<BlockDecomposition> decomps_;  // a single entry for constant H
};

LocalityCertificate certify(const TimeDependentHamiltonian& h, double mu, const TimeGrid& grid,
                            const Permutation& permutation);

/// Row-sum bound for |H_ij| <= h e^{-mu'|i-j|}: 4h / (1 - e^{mu - mu'}).
/// Throws DomainError when mu >= mu'.
double exp_local_bound(double h, double mu_prime, double mu);

struct OptimalMu {
    double mu_min;
    double v_lr_min;
};

/// Minimizer of 4h / [mu (1 - e^{mu - mu'})], mu_min = W(e^{1 + mu'}) - 1.
OptimalMu optimal_mu_exp_local(double h, double mu_prime);

struct MuOptimum {
    double mu;
    LocalityCertificate certificate;
    bool used_grid_fallback;  // the pre-scan found several local minima
};

/// Golden-section minimization of v_lr(mu) on [lo, hi] after a 100-point
/// pre-scan. Falls back to the best scanned point when the scan is not
/// unimodal.
MuOptimum optimize_mu_generic(const TimeDependentHamiltonian& h, const TimeGrid& grid, double lo, double hi,
                              const Permutation& permutation);
MuOptimum optimize_mu_generic(const LocalityProfile& profile, double lo, double hi);

}  // namespace lrlab
