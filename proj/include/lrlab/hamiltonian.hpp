#pragma once

#include <cstdint>
#include <optional>

#include "lrlab/numerics.hpp"

namespace lrlab {

/// H(t) as either a constant matrix or the linear schedule
/// (1 - t/T) H_i + (t/T) H_f on [0, T].
class TimeDependentHamiltonian {
public:
    enum class Kind { constant, linear_interpolation };

    static TimeDependentHamiltonian constant(Matrix h);
    static TimeDependentHamiltonian linear(Matrix h_initial, Matrix h_final, double total_time);

    Kind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(initial_.rows()); }

    /// Schedule length T; empty for constant Hamiltonians.
    std::optional<double> total_time() const noexcept;

    const Matrix& h_initial() const noexcept { return initial_; }
    const Matrix& h_final() const noexcept { return final_; }

    /// Throws DomainError for t outside [0, T] on a linear schedule.
    Matrix evaluate(double t) const;
    Matrix derivative(double t) const;

    /// Same schedule with every matrix multiplied by c.
    TimeDependentHamiltonian scaled(double c) const;

private:
    TimeDependentHamiltonian(Kind kind, Matrix initial, Matrix final, double total_time);
    void check_time(double t) const;

    Kind kind_;
    Matrix initial_;
    Matrix final_;
    double total_time_;
};

/// H_i = 0.1 Σ_k k|k><k| (k = 0..10) and H_f = H_i plus 0.5 on the first
/// off-diagonals, interpolated linearly over [0, T].
TimeDependentHamiltonian build_eleven_level_example(double total_time);

struct ExpLocalSpec {
    std::size_t dimension = 8;
    double amplitude = 1.0;   // h
    double decay_rate = 1.0;  // mu'
    std::uint64_t seed = 0;
};

/// Hermitian matrix with |H_ij| uniform in [0, h e^{-mu'|i-j|}], uniform phase
/// off the diagonal and a real diagonal of random sign. Reproducible from the
/// seed.
Matrix random_exp_local(const ExpLocalSpec& spec);

}  // namespace lrlab
