#pragma once

#include <functional>
#include <vector>

#include "lrlab/basis_blocks.hpp"
#include "lrlab/hamiltonian.hpp"
#include "lrlab/locality.hpp"
#include "lrlab/numerics.hpp"

namespace lrlab {

/// Exponential integrators; both apply exp(-i h H_eff) per step with H_eff
/// Hermitian, so every step is unitary to round-off.
enum class StepRule {
    midpoint,  // H_eff = H(t + h/2), second order
    magnus4,   // two-point Gauss-Legendre Magnus with the commutator term, fourth order
};

struct EvolveOptions {
    double tol = 1e-9;
    StepRule rule = StepRule::magnus4;
    int max_halvings = 20;
};

/// Time-ordered U(t, 0) sampled on a grid.
struct Propagator {
    TimeGrid grid;
    std::vector<Matrix> unitaries;  // one per grid point, unitaries[0] = 1
    double step;                    // largest substep of the accepted level
    double tolerance;
    double final_difference;  // ‖U_h(T) - U_{h/2}(T)‖ at acceptance
    int halvings;
    StepRule rule;
    double unitarity_defect;  // max_k ‖U_k† U_k - 1‖

    std::size_t size() const noexcept { return unitaries.size(); }
    const Matrix& operator[](std::size_t k) const { return unitaries[k]; }
    const Matrix& final() const { return unitaries.back(); }
};

using Generator = std::function<Matrix(double)>;

/// Steps every grid interval with 2^k equal substeps, doubling k until the
/// final-time propagators of consecutive levels differ by less than tol.
/// Throws IntegrationError after max_halvings doublings.
Propagator evolve(const Generator& hamiltonian, std::size_t dimension, const TimeGrid& grid,
                  const EvolveOptions& options);

/// Constant Hamiltonians reuse one step exponential per substep length.
Propagator evolve(const TimeDependentHamiltonian& h, const TimeGrid& grid, const EvolveOptions& options);

/// Uniform 1001-point grid on [0, t_final].
Propagator evolve(const TimeDependentHamiltonian& h, double t_final, double tol);

double unitarity_defect(const Matrix& u);

/// U† A U.
Matrix heisenberg(const Matrix& a, const Matrix& u);

/// ‖[U† A U, B]‖.
double commutator_norm(const Matrix& a, const Matrix& b, const Matrix& u);

/// 2 min(|A|,|B|) ‖A‖ ‖B‖ e^{-mu d(A,B)} (e^{⟨a⟩ |t|} - 1). Throws
/// ValidationError when the supports overlap.
double lr_bound_rhs(const Block& supp_a, const Block& supp_b, double norm_a, double norm_b, double mu,
                    double a_timeavg, double t);

/// Σ_{i ∈ block} |i><i| in the full dimension.
Matrix block_projector(const Block& block, std::size_t dimension);

struct SpreadReport {
    TimeGrid grid;
    Label source;
    std::vector<RealVector> amplitudes;  // amplitudes[k](j) = |<j|U(t_k,0)|source>|
};

SpreadReport propagator_spread(const Propagator& u, Label source);

struct SpreadAudit {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double min_margin = INFINITY;
};

/// Checks |<j|U|i>| <= e^{-mu|j-i|} (e^{⟨a⟩_t t} - 1) for every j != source,
/// with ⟨a⟩_t the running average of the certificate.
SpreadAudit audit_spread(const SpreadReport& spread, const LocalityCertificate& certificate,
                         double violation_tol = 1e-9);

struct AuditReport {
    std::vector<double> times;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> margin;
    std::size_t violations = 0;
    double min_margin = INFINITY;
    double violation_tol = 1e-9;
};

/// ‖[A^t, B]‖ against the bound for arbitrary A, B supported on the given
/// disjoint blocks. The certificate grid must coincide with the propagator's.
AuditReport bound_audit(const Propagator& u, const Matrix& a, const Block& supp_a, const Matrix& b,
                        const Block& supp_b, const LocalityCertificate& certificate, double violation_tol = 1e-9);

/// Projectors onto the two supports.
AuditReport bound_audit(const Propagator& u, const Block& supp_a, const Block& supp_b,
                        const LocalityCertificate& certificate, double violation_tol = 1e-9);

/// Evolves H on the certificate grid at tol 1e-11, then audits projectors.
AuditReport bound_audit(const TimeDependentHamiltonian& h, const Block& supp_a, const Block& supp_b,
                        const LocalityCertificate& certificate, double violation_tol = 1e-9);

}  // namespace lrlab
