#include "lrlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lrlab/errors.hpp"

namespace lrlab {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw ValidationError("time grid needs at least two points");
    if (points_.front() != 0.0) throw ValidationError("time grid must start at 0");
    for (std::size_t k = 1; k < points_.size(); ++k) {
        if (!(points_[k] > points_[k - 1]))
            throw ValidationError("time grid must be strictly increasing");
    }
}

TimeGrid TimeGrid::uniform(double t_final, std::size_t count) {
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw ValidationError("uniform grid needs a positive finite end time");
    if (count < 2) throw ValidationError("uniform grid needs at least two points");
    std::vector<double> pts(count);
    const double n = static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) pts[k] = t_final * (static_cast<double>(k) / n);
    pts.back() = t_final;
    return TimeGrid(std::move(pts));
}

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

double hermiticity_defect(const Matrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return operator_norm(m - m.adjoint());
}

void require_hermitian(const Matrix& m, double tol, const char* what) {
    require_finite(m, what);
    if (m.rows() != m.cols()) throw ValidationError(std::string(what) + ": matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol * scale)
        throw ValidationError(std::string(what) + ": matrix is not Hermitian (defect " +
                              std::to_string(defect) + ")");
}

namespace {

// Exact structural test; used to pick the cheaper norm route, never to
// validate input.
bool exactly_hermitian(const Matrix& m, double sign) {
    const auto n = m.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            if (m(i, j) != sign * std::conj(m(j, i))) return false;
    return true;
}

double hermitian_norm(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace

double operator_norm(const Matrix& m) {
    if (!m.allFinite()) throw ValidationError("operator_norm: non-finite entry");
    if (m.size() == 0) return 0.0;
    if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
    if (m.rows() == m.cols()) {
        if (exactly_hermitian(m, 1.0)) return hermitian_norm(m);
        if (exactly_hermitian(m, -1.0)) return hermitian_norm(Complex(0.0, 1.0) * m);
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Eigensystem hermitian_eigensystem(const Matrix& m) {
    require_finite(m, "hermitian_eigensystem");
    if (m.rows() != m.cols()) throw ValidationError("hermitian_eigensystem: matrix is not square");
    const double scale = operator_norm(m);
    if (operator_norm(m - m.adjoint()) > 1e-10 * scale)
        throw ValidationError("hermitian_eigensystem: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("hermitian_eigensystem: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix evolution_step(const Matrix& hamiltonian, double h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
    if (es.info() != Eigen::Success) throw NumericalError("evolution_step: solver failed");
    const auto& v = es.eigenvectors();
    Vector phases(v.cols());
    for (Eigen::Index k = 0; k < v.cols(); ++k)
        phases(k) = std::polar(1.0, -h * es.eigenvalues()(k));
    return v * phases.asDiagonal() * v.adjoint();
}

Matrix unitary_exponential(const Matrix& a) {
    require_finite(a, "unitary_exponential");
    if (a.rows() != a.cols()) throw ValidationError("unitary_exponential: matrix is not square");
    const double scale = operator_norm(a);
    if (operator_norm(a + a.adjoint()) > 1e-10 * scale)
        throw ValidationError("unitary_exponential: matrix is not anti-Hermitian");
    // A = -iH with H = iA Hermitian, so exp(A) = exp(-i·1·H).
    const Matrix h = Complex(0.0, 1.0) * a;
    return evolution_step(0.5 * (h + h.adjoint()), 1.0);
}

double lambert_w(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("lambert_w: argument must be finite and >= 0");
    if (x == 0.0) return 0.0;
    // Newton on f(w) = w e^w - x; convex and increasing for w >= 0, so the
    // iterates from log(1 + x) converge monotonically.
    double w = std::log1p(x);
    for (int it = 0; it < 100; ++it) {
        const double ew = std::exp(w);
        const double step = (w * ew - x) / (ew * (w + 1.0));
        w -= step;
        if (std::abs(step) <= 4e-16 * std::max(1.0, w)) break;
    }
    return w;
}

std::vector<double> running_integral(std::span<const double> samples, const TimeGrid& grid) {
    if (samples.size() != grid.size())
        throw ValidationError("running_integral: sample count does not match grid");
    std::vector<double> acc(samples.size(), 0.0);
    for (std::size_t k = 1; k < samples.size(); ++k)
        acc[k] = acc[k - 1] + 0.5 * (grid[k] - grid[k - 1]) * (samples[k] + samples[k - 1]);
    return acc;
}

std::vector<double> running_time_average(std::span<const double> samples, const TimeGrid& grid) {
    auto acc = running_integral(samples, grid);
    acc[0] = samples[0];
    for (std::size_t k = 1; k < acc.size(); ++k) acc[k] /= grid[k];
    return acc;
}

double time_average(std::span<const double> samples, const TimeGrid& grid) {
    if (!(grid.back() > 0.0)) throw DomainError("time_average: t must be positive");
    return running_integral(samples, grid).back() / grid.back();
}

std::size_t bandwidth(const Matrix& m, double cutoff) {
    std::size_t bw = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > cutoff)
                bw = std::max<std::size_t>(bw, static_cast<std::size_t>(std::abs(i - j)));
    return bw;
}

}  // namespace lrlab
