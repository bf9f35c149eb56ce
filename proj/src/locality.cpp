#include "lrlab/locality.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

double weighted_term(const BlockTerm& t, double mu) {
    return static_cast<double>(t.block.size()) * t.norm * std::exp(mu * static_cast<double>(t.block.diameter()));
}

void require_positive_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be positive and finite");
}

}  // namespace

std::vector<double> level_sums(const BlockDecomposition& decomp, double mu) {
    std::vector<double> sums(decomp.dimension, 0.0);
    for (const auto& t : decomp.terms) {
        const double w = weighted_term(t, mu);
        for (Label l : t.block.labels()) sums[l] += w;
    }
    return sums;
}

double a_mu_pointwise(const BlockDecomposition& decomp, double mu) {
    require_positive_mu(mu);
    const auto sums = level_sums(decomp, mu);
    return sums.empty() ? 0.0 : *std::max_element(sums.begin(), sums.end());
}

double probe_block_sum(const BlockDecomposition& decomp, double mu, const Block& probe) {
    double sum = 0.0;
    for (const auto& t : decomp.terms)
        if (t.block.intersects(probe)) sum += weighted_term(t, mu);
    return sum;
}

std::vector<bool> check_condition_eq1(const BlockDecomposition& decomp, double mu, double a,
                                      const std::vector<Block>& probes) {
    std::vector<bool> ok;
    ok.reserve(probes.size());
    for (const auto& p : probes) {
        if (p.max() >= decomp.dimension) throw ValidationError("probe block exceeds the dimension");
        ok.push_back(probe_block_sum(decomp, mu, p) <= static_cast<double>(p.size()) * a);
    }
    return ok;
}

std::vector<Block> default_probes(std::size_t dimension, std::size_t max_size, std::size_t random_count,
                                  std::uint64_t seed) {
    std::vector<Block> probes;
    for (std::size_t size = 1; size <= std::min(max_size, dimension); ++size)
        for (std::size_t first = 0; first + size <= dimension; ++first)
            probes.push_back(Block::interval(first, first + size - 1));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> label(0, dimension - 1);
    std::uniform_int_distribution<std::size_t> count(1, std::max<std::size_t>(1, std::min(max_size, dimension)));
    for (std::size_t k = 0; k < random_count; ++k) {
        std::vector<Label> labels(count(rng));
        for (auto& l : labels) l = label(rng);
        probes.emplace_back(std::move(labels));
    }
    return probes;
}

std::vector<double> LocalityCertificate::running_timeavg() const {
    return running_time_average(a_mu_samples, grid);
}

LocalityProfile::LocalityProfile(const TimeDependentHamiltonian& h, const TimeGrid& grid, Permutation permutation)
    : grid_(grid), permutation_(std::move(permutation)) {
    if (permutation_.size() != h.dimension())
        throw ValidationError("basis permutation does not match the Hamiltonian dimension");
    if (h.is_constant()) {
        decomps_.push_back(pairwise_decompose(permutation_.apply(h.evaluate(0.0))));
        return;
    }
    decomps_.reserve(grid.size());
    for (double t : grid.points()) decomps_.push_back(pairwise_decompose(permutation_.apply(h.evaluate(t))));
}

const BlockDecomposition& LocalityProfile::decomposition(std::size_t k) const {
    return decomps_.size() == 1 ? decomps_.front() : decomps_.at(k);
}

LocalityCertificate LocalityProfile::certify(double mu) const {
    require_positive_mu(mu);
    std::vector<double> samples(grid_.size());
    if (decomps_.size() == 1) {
        std::fill(samples.begin(), samples.end(), a_mu_pointwise(decomps_.front(), mu));
    } else {
        for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = a_mu_pointwise(decomps_[k], mu);
    }
    const double a_max = *std::max_element(samples.begin(), samples.end());
    const double a_avg = time_average(samples, grid_);
    return LocalityCertificate{mu, grid_, std::move(samples), a_max, a_avg, a_avg / mu, a_max / mu, permutation_};
}

LocalityCertificate certify(const TimeDependentHamiltonian& h, double mu, const TimeGrid& grid,
                            const Permutation& permutation) {
    return LocalityProfile(h, grid, permutation).certify(mu);
}

double exp_local_bound(double h, double mu_prime, double mu) {
    if (!(mu < mu_prime)) throw DomainError("exp_local_bound: divergent regime (mu >= mu')");
    if (mu < 0.0) throw DomainError("exp_local_bound: mu must be nonnegative");
    return 4.0 * h / (1.0 - std::exp(mu - mu_prime));
}

OptimalMu optimal_mu_exp_local(double h, double mu_prime) {
    if (!(h > 0.0)) throw DomainError("optimal_mu_exp_local: h must be positive");
    if (!(mu_prime > 0.0)) throw DomainError("optimal_mu_exp_local: mu' must be positive");
    const double mu_min = lambert_w(std::exp(1.0 + mu_prime)) - 1.0;
    const double v = 4.0 * h / (mu_min * (1.0 - std::exp(mu_min - mu_prime)));
    return {mu_min, v};
}

MuOptimum optimize_mu_generic(const LocalityProfile& profile, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw DomainError("optimize_mu_generic: need 0 < lo < hi");

    auto v_lr = [&](double mu) { return profile.certify(mu).v_lr; };

    constexpr int kScan = 100;
    std::vector<double> mus(kScan), vals(kScan);
    bool any_finite = false;
    for (int k = 0; k < kScan; ++k) {
        mus[k] = lo + (hi - lo) * static_cast<double>(k) / (kScan - 1);
        vals[k] = v_lr(mus[k]);
        if (std::isfinite(vals[k])) any_finite = true;
    }
    if (!any_finite) throw NumericalError("optimize_mu_generic: v_lr is non-finite across [lo, hi]");
    for (double v : vals)
        if (!std::isfinite(v)) throw NumericalError("optimize_mu_generic: v_lr is non-finite inside [lo, hi]");

    const auto best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());

    // Count strict interior local minima, ignoring round-off sized wiggles.
    int minima = 0;
    for (int k = 0; k < kScan; ++k) {
        const double tol = 1e-12 * std::abs(vals[k]);
        const bool left = k == 0 || vals[k] < vals[k - 1] - tol;
        const bool right = k == kScan - 1 || vals[k] < vals[k + 1] - tol;
        if (left && right) ++minima;
    }
    if (minima > 1) return {mus[best], profile.certify(mus[best]), true};

    double a = mus[std::max(best - 1, 0)];
    double b = mus[std::min(best + 1, kScan - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = v_lr(c), fd = v_lr(d);
    while ((b - a) > 1e-6 * std::max(std::abs(a), std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = v_lr(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = v_lr(d);
        }
    }
    // Keep the bracket ends as candidates so monotone profiles land on lo/hi.
    double mu = 0.5 * (a + b);
    double fmu = v_lr(mu);
    for (double cand : {a, b, mus[best]}) {
        const double f = v_lr(cand);
        if (f < fmu) {
            mu = cand;
            fmu = f;
        }
    }
    return {mu, profile.certify(mu), false};
}

MuOptimum optimize_mu_generic(const TimeDependentHamiltonian& h, const TimeGrid& grid, double lo, double hi,
                              const Permutation& permutation) {
    return optimize_mu_generic(LocalityProfile(h, grid, permutation), lo, hi);
}

}  // namespace lrlab
