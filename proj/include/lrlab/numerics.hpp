#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lrlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Strictly increasing sample times starting at 0 (hbar = 1 units).
class TimeGrid {
public:
    /// Throws ValidationError unless points[0] == 0, the sequence is strictly
    /// increasing and holds at least two values.
    explicit TimeGrid(std::vector<double> points);

    /// `count` equally spaced points covering [0, t_final].
    static TimeGrid uniform(double t_final, std::size_t count);

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    double front() const noexcept { return points_.front(); }
    double back() const noexcept { return points_.back(); }
    std::span<const double> points() const noexcept { return points_; }

private:
    std::vector<double> points_;
};

struct Eigensystem {
    RealVector values;  // ascending
    Matrix vectors;     // columns are orthonormal eigenvectors
};

/// Largest singular value. Hermitian and anti-Hermitian inputs take an
/// eigenvalue route, everything else a full SVD.
double operator_norm(const Matrix& m);

/// ‖M − M†‖ as an operator norm.
double hermiticity_defect(const Matrix& m);

Eigensystem hermitian_eigensystem(const Matrix& m);

/// exp(A) for anti-Hermitian A, via the eigendecomposition of iA.
Matrix unitary_exponential(const Matrix& a);

/// exp(-i h H) for Hermitian H. Same route as unitary_exponential without the
/// anti-Hermiticity round trip.
Matrix evolution_step(const Matrix& hamiltonian, double h);

/// Principal branch of the product logarithm on x >= 0.
double lambert_w(double x);

/// Trapezoidal (1/t) ∫_0^t f over the grid, t = grid.back().
double time_average(std::span<const double> samples, const TimeGrid& grid);

/// Running trapezoidal averages: entry k is (1/t_k) ∫_0^{t_k} f, entry 0 is f(0).
std::vector<double> running_time_average(std::span<const double> samples, const TimeGrid& grid);

/// Running trapezoidal integrals: entry k is ∫_0^{t_k} f.
std::vector<double> running_integral(std::span<const double> samples, const TimeGrid& grid);

/// Number of off-diagonal positions |i-j| spanned by entries above `cutoff`.
std::size_t bandwidth(const Matrix& m, double cutoff = 1e-14);

void require_finite(const Matrix& m, const char* what);
void require_hermitian(const Matrix& m, double tol, const char* what);

}  // namespace lrlab
