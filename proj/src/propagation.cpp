#include "lrlab/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Hermitian H_eff with U(t + h, t) ≈ exp(-i h H_eff).
Matrix effective_hamiltonian(const Generator& hamiltonian, StepRule rule, double t, double h) {
    if (rule == StepRule::midpoint) return hamiltonian(t + 0.5 * h);
    const Matrix h1 = hamiltonian(t + h * (0.5 - kSqrt3 / 6.0));
    const Matrix h2 = hamiltonian(t + h * (0.5 + kSqrt3 / 6.0));
    Matrix eff = 0.5 * (h1 + h2) + Complex(0.0, kSqrt3 / 12.0 * h) * (h1 * h2 - h2 * h1);
    return 0.5 * (eff + eff.adjoint());
}

using StepFactory = std::function<Matrix(double t, double h)>;

std::vector<Matrix> integrate_level(const StepFactory& step, std::size_t dimension, const TimeGrid& grid,
                                    std::size_t substeps) {
    const auto n = static_cast<Eigen::Index>(dimension);
    std::vector<Matrix> out;
    out.reserve(grid.size());
    Matrix u = Matrix::Identity(n, n);
    out.push_back(u);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i];
        const double h = (grid[i + 1] - grid[i]) / static_cast<double>(substeps);
        for (std::size_t s = 0; s < substeps; ++s) u = step(t0 + static_cast<double>(s) * h, h) * u;
        out.push_back(u);
    }
    return out;
}

double max_spacing(const TimeGrid& grid) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) m = std::max(m, grid[i + 1] - grid[i]);
    return m;
}

Propagator evolve_with(const StepFactory& step, std::size_t dimension, const TimeGrid& grid,
                       const EvolveOptions& options) {
    if (!(options.tol > 0.0)) throw ValidationError("evolve: tolerance must be positive");
    std::size_t substeps = 1;
    auto coarse = integrate_level(step, dimension, grid, substeps);
    double diff = INFINITY;
    for (int halvings = 1; halvings <= options.max_halvings; ++halvings) {
        substeps *= 2;
        auto fine = integrate_level(step, dimension, grid, substeps);
        diff = operator_norm(fine.back() - coarse.back());
        if (diff < options.tol) {
            double defect = 0.0;
            for (const auto& u : fine) defect = std::max(defect, unitarity_defect(u));
            return Propagator{grid,
                              std::move(fine),
                              max_spacing(grid) / static_cast<double>(substeps),
                              options.tol,
                              diff,
                              halvings,
                              options.rule,
                              defect};
        }
        coarse = std::move(fine);
    }
    throw IntegrationError("evolve: no convergence after " + std::to_string(options.max_halvings) +
                               " step halvings (last difference " + std::to_string(diff) + ")",
                           diff);
}

}  // namespace

double unitarity_defect(const Matrix& u) {
    const Matrix g = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    return operator_norm(0.5 * (g + g.adjoint()));
}

Propagator evolve(const Generator& hamiltonian, std::size_t dimension, const TimeGrid& grid,
                  const EvolveOptions& options) {
    StepFactory step = [&](double t, double h) {
        return evolution_step(effective_hamiltonian(hamiltonian, options.rule, t, h), h);
    };
    return evolve_with(step, dimension, grid, options);
}

Propagator evolve(const TimeDependentHamiltonian& h, const TimeGrid& grid, const EvolveOptions& options) {
    if (h.total_time() && grid.back() > *h.total_time() * (1.0 + 1e-12))
        throw DomainError("evolve: grid extends past the schedule end T");
    if (!h.is_constant()) {
        // Clamp the last Gauss node so round-off never steps past T.
        const double t_max = *h.total_time();
        Generator gen = [&h, t_max](double t) { return h.evaluate(std::min(t, t_max)); };
        return evolve(gen, h.dimension(), grid, options);
    }
    const Matrix& hc = h.h_initial();
    // Cache keyed on the substep length; uniform grids hit it every step.
    std::optional<double> cached_h;
    Matrix cached;
    StepFactory step = [&](double, double dt) -> const Matrix& {
        if (!cached_h || *cached_h != dt) {
            cached = evolution_step(hc, dt);
            cached_h = dt;
        }
        return cached;
    };
    return evolve_with(step, h.dimension(), grid, options);
}

Propagator evolve(const TimeDependentHamiltonian& h, double t_final, double tol) {
    if (!(t_final > 0.0)) throw ValidationError("evolve: t_final must be positive");
    EvolveOptions opts;
    opts.tol = tol;
    return evolve(h, TimeGrid::uniform(t_final, 1001), opts);
}

Matrix heisenberg(const Matrix& a, const Matrix& u) {
    if (a.rows() != a.cols() || u.rows() != u.cols() || a.rows() != u.rows())
        throw ValidationError("heisenberg: dimension mismatch");
    return u.adjoint() * a * u;
}

double commutator_norm(const Matrix& a, const Matrix& b, const Matrix& u) {
    if (b.rows() != a.rows() || b.cols() != a.cols()) throw ValidationError("commutator_norm: dimension mismatch");
    const Matrix at = heisenberg(a, u);
    return operator_norm(at * b - b * at);
}

double lr_bound_rhs(const Block& supp_a, const Block& supp_b, double norm_a, double norm_b, double mu,
                    double a_timeavg, double t) {
    if (supp_a.intersects(supp_b)) throw ValidationError("lr_bound_rhs: supports of A and B overlap");
    const double d = static_cast<double>(block_distance(supp_a, supp_b));
    const double m = static_cast<double>(std::min(supp_a.size(), supp_b.size()));
    return 2.0 * m * norm_a * norm_b * std::exp(-mu * d) * std::expm1(a_timeavg * std::abs(t));
}

Matrix block_projector(const Block& block, std::size_t dimension) {
    if (block.max() >= dimension) throw ValidationError("block exceeds the Hilbert space dimension");
    const auto n = static_cast<Eigen::Index>(dimension);
    Matrix p = Matrix::Zero(n, n);
    for (Label l : block.labels()) p(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)) = 1.0;
    return p;
}

SpreadReport propagator_spread(const Propagator& u, Label source) {
    const auto n = u.unitaries.front().rows();
    if (source >= static_cast<Label>(n)) throw ValidationError("propagator_spread: source label out of range");
    SpreadReport out{u.grid, source, {}};
    out.amplitudes.reserve(u.size());
    for (const auto& m : u.unitaries) out.amplitudes.push_back(m.col(static_cast<Eigen::Index>(source)).cwiseAbs());
    return out;
}

namespace {

void require_same_grid(const TimeGrid& a, const TimeGrid& b) {
    if (a.size() != b.size()) throw ValidationError("certificate grid does not match the propagator grid");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(a[k])))
            throw ValidationError("certificate grid does not match the propagator grid");
}

void require_supported(const Matrix& op, const Block& supp, const char* name) {
    for (Eigen::Index i = 0; i < op.rows(); ++i)
        for (Eigen::Index j = 0; j < op.cols(); ++j)
            if (std::abs(op(i, j)) > kStructuralZero &&
                !(supp.contains(static_cast<Label>(i)) && supp.contains(static_cast<Label>(j))))
                throw ValidationError(std::string(name) + " has entries outside its declared support");
}

}  // namespace

SpreadAudit audit_spread(const SpreadReport& spread, const LocalityCertificate& certificate, double violation_tol) {
    require_same_grid(spread.grid, certificate.grid);
    const auto avg = certificate.running_timeavg();
    SpreadAudit audit;
    for (std::size_t k = 0; k < spread.amplitudes.size(); ++k) {
        const double t = spread.grid[k];
        const double growth = std::expm1(avg[k] * std::abs(t));
        const auto& amp = spread.amplitudes[k];
        for (Eigen::Index j = 0; j < amp.size(); ++j) {
            if (static_cast<Label>(j) == spread.source) continue;
            const double d = std::abs(static_cast<double>(j) - static_cast<double>(spread.source));
            const double margin = std::exp(-certificate.mu * d) * growth - amp(j);
            ++audit.checked;
            audit.min_margin = std::min(audit.min_margin, margin);
            if (margin < -violation_tol) ++audit.violations;
        }
    }
    return audit;
}

AuditReport bound_audit(const Propagator& u, const Matrix& a, const Block& supp_a, const Matrix& b,
                        const Block& supp_b, const LocalityCertificate& certificate, double violation_tol) {
    if (supp_a.intersects(supp_b)) throw ValidationError("bound_audit: supports of A and B overlap");
    const auto n = static_cast<std::size_t>(u.unitaries.front().rows());
    if (supp_a.max() >= n || supp_b.max() >= n) throw ValidationError("bound_audit: support exceeds dimension");
    require_supported(a, supp_a, "A");
    require_supported(b, supp_b, "B");
    require_same_grid(u.grid, certificate.grid);

    const double norm_a = operator_norm(a);
    const double norm_b = operator_norm(b);
    const auto avg = certificate.running_timeavg();

    AuditReport r;
    r.violation_tol = violation_tol;
    const std::size_t m = u.size();
    r.times.resize(m);
    r.lhs.resize(m);
    r.rhs.resize(m);
    r.margin.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double t = u.grid[k];
        r.times[k] = t;
        r.lhs[k] = commutator_norm(a, b, u[k]);
        r.rhs[k] = lr_bound_rhs(supp_a, supp_b, norm_a, norm_b, certificate.mu, avg[k], t);
        r.margin[k] = r.rhs[k] - r.lhs[k];
        r.min_margin = std::min(r.min_margin, r.margin[k]);
        if (r.margin[k] < -violation_tol) ++r.violations;
    }
    return r;
}

AuditReport bound_audit(const Propagator& u, const Block& supp_a, const Block& supp_b,
                        const LocalityCertificate& certificate, double violation_tol) {
    if (supp_a.intersects(supp_b)) throw ValidationError("bound_audit: supports of A and B overlap");
    const auto n = static_cast<std::size_t>(u.unitaries.front().rows());
    return bound_audit(u, block_projector(supp_a, n), supp_a, block_projector(supp_b, n), supp_b, certificate,
                       violation_tol);
}

AuditReport bound_audit(const TimeDependentHamiltonian& h, const Block& supp_a, const Block& supp_b,
                        const LocalityCertificate& certificate, double violation_tol) {
    if (supp_a.intersects(supp_b)) throw ValidationError("bound_audit: supports of A and B overlap");
    EvolveOptions opts;
    opts.tol = 1e-11;
    const auto u = evolve(h, certificate.grid, opts);
    return bound_audit(u, supp_a, supp_b, certificate, violation_tol);
}

}  // namespace lrlab
