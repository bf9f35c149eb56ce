#include "lrlab/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "lrlab/errors.hpp"

namespace lrlab {

TimeDependentHamiltonian::TimeDependentHamiltonian(Kind kind, Matrix initial, Matrix final, double total_time)
    : kind_(kind), initial_(std::move(initial)), final_(std::move(final)), total_time_(total_time) {}

TimeDependentHamiltonian TimeDependentHamiltonian::constant(Matrix h) {
    require_hermitian(h, 1e-12, "constant Hamiltonian");
    if (h.rows() == 0) throw ValidationError("Hamiltonian must have positive dimension");
    Matrix copy = h;
    return TimeDependentHamiltonian(Kind::constant, std::move(h), std::move(copy), 0.0);
}

TimeDependentHamiltonian TimeDependentHamiltonian::linear(Matrix h_initial, Matrix h_final, double total_time) {
    require_hermitian(h_initial, 1e-12, "initial Hamiltonian");
    require_hermitian(h_final, 1e-12, "final Hamiltonian");
    if (h_initial.rows() == 0) throw ValidationError("Hamiltonian must have positive dimension");
    if (h_initial.rows() != h_final.rows())
        throw ValidationError("initial and final Hamiltonians differ in dimension");
    if (!(total_time > 0.0) || !std::isfinite(total_time))
        throw ValidationError("total time T must be positive and finite");
    return TimeDependentHamiltonian(Kind::linear_interpolation, std::move(h_initial), std::move(h_final),
                                    total_time);
}

std::optional<double> TimeDependentHamiltonian::total_time() const noexcept {
    if (kind_ == Kind::constant) return std::nullopt;
    return total_time_;
}

void TimeDependentHamiltonian::check_time(double t) const {
    if (!std::isfinite(t)) throw DomainError("Hamiltonian evaluated at non-finite time");
    if (kind_ == Kind::linear_interpolation && (t < 0.0 || t > total_time_))
        throw DomainError("t = " + std::to_string(t) + " outside schedule [0, " + std::to_string(total_time_) + "]");
}

Matrix TimeDependentHamiltonian::evaluate(double t) const {
    check_time(t);
    if (kind_ == Kind::constant) return initial_;
    const double s = t / total_time_;
    return (1.0 - s) * initial_ + s * final_;
}

Matrix TimeDependentHamiltonian::derivative(double t) const {
    check_time(t);
    if (kind_ == Kind::constant) return Matrix::Zero(initial_.rows(), initial_.cols());
    return (final_ - initial_) / total_time_;
}

TimeDependentHamiltonian TimeDependentHamiltonian::scaled(double c) const {
    return TimeDependentHamiltonian(kind_, c * initial_, c * final_, total_time_);
}

TimeDependentHamiltonian build_eleven_level_example(double total_time) {
    constexpr Eigen::Index n = 11;
    Matrix hi = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) hi(k, k) = 0.1 * static_cast<double>(k);
    Matrix hf = hi;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        hf(k, k + 1) = 0.5;
        hf(k + 1, k) = 0.5;
    }
    return TimeDependentHamiltonian::linear(std::move(hi), std::move(hf), total_time);
}

Matrix random_exp_local(const ExpLocalSpec& spec) {
    if (spec.dimension < 2) throw ValidationError("random_exp_local: dimension must be >= 2");
    if (!(spec.amplitude > 0.0)) throw ValidationError("random_exp_local: amplitude h must be positive");
    if (!(spec.decay_rate > 0.0)) throw ValidationError("random_exp_local: decay rate must be positive");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(spec.dimension);
    Matrix h = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double magnitude = spec.amplitude * unit(rng);
        h(i, i) = unit(rng) < 0.5 ? -magnitude : magnitude;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double envelope = spec.amplitude * std::exp(-spec.decay_rate * static_cast<double>(j - i));
            const double phase = 2.0 * std::numbers::pi * unit(rng);
            h(i, j) = std::polar(envelope * unit(rng), phase);
            h(j, i) = std::conj(h(i, j));
        }
    }
    return h;
}

}  // namespace lrlab
