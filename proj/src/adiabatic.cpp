#include "lrlab/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lrlab/basis_blocks.hpp"
#include "lrlab/errors.hpp"

namespace lrlab {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t cluster_size(const RealVector& values, double cluster_tol) {
    std::size_t g = 0;
    while (g < static_cast<std::size_t>(values.size()) && values(static_cast<Eigen::Index>(g)) <= values(0) + cluster_tol)
        ++g;
    return g;
}

Matrix projector_from(const Matrix& vectors, std::size_t ground_dim) {
    const auto g = static_cast<Eigen::Index>(ground_dim);
    return vectors.leftCols(g) * vectors.leftCols(g).adjoint();
}

// Ġ in the eigenbasis of H(t), then rotated back.
Matrix projector_derivative(const Eigensystem& es, const Matrix& hdot, std::size_t ground_dim) {
    const auto n = es.values.size();
    const auto g = static_cast<Eigen::Index>(ground_dim);
    if (g == 0 || g >= n) throw NumericalError("ground cluster must be a proper subspace");
    if (es.values(g) - es.values(g - 1) < 1e-8)
        throw NumericalError("Ġ is ill-conditioned: gap below 1e-8");
    const Matrix hdot_eig = es.vectors.adjoint() * hdot * es.vectors;
    Matrix x = Matrix::Zero(n, n);
    for (Eigen::Index k = g; k < n; ++k)
        for (Eigen::Index j = 0; j < g; ++j) x(k, j) = hdot_eig(k, j) / (es.values(j) - es.values(k));
    const Matrix gdot_eig = x + x.adjoint();
    return es.vectors * gdot_eig * es.vectors.adjoint();
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// -i[Ġ, G] = H - H_ad.
Matrix hdiff_from(const Eigensystem& es, const Matrix& hdot, std::size_t ground_dim) {
    const Matrix gdot = projector_derivative(es, hdot, ground_dim);
    const Matrix gp = projector_from(es.vectors, ground_dim);
    Matrix d = -kI * commutator(gdot, gp);
    return 0.5 * (d + d.adjoint());
}

Eigensystem eigensystem_at(const TimeDependentHamiltonian& h, double t) {
    return hermitian_eigensystem(h.evaluate(t));
}

}  // namespace

SpectralFlow spectral_flow(const TimeDependentHamiltonian& h, const TimeGrid& grid, double cluster_tol) {
    if (!(cluster_tol >= 0.0)) throw ValidationError("cluster tolerance must be nonnegative");
    SpectralFlow flow{grid, {}, {}, {}, {}, INFINITY, 0, 1.0};
    const std::size_t m = grid.size();
    flow.eigenvalues.reserve(m);
    flow.eigenvectors.reserve(m);
    flow.ground_projector.reserve(m);
    flow.gap.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        auto es = eigensystem_at(h, grid[k]);
        const auto n = es.values.size();
        for (Eigen::Index c = 0; c < n; ++c) {
            auto col = es.vectors.col(c);
            Complex ref;
            if (k == 0) {
                Eigen::Index imax = 0;
                col.cwiseAbs().maxCoeff(&imax);
                ref = col(imax);
            } else {
                ref = flow.eigenvectors.back().col(c).dot(col);  // <prev|cur>
                flow.min_overlap = std::min(flow.min_overlap, std::abs(ref));
            }
            if (std::abs(ref) > 0.0) col *= std::conj(ref) / std::abs(ref);
        }
        const std::size_t g = cluster_size(es.values, cluster_tol);
        if (k == 0) {
            flow.ground_dim = g;
        } else if (g != flow.ground_dim) {
            throw LevelCrossingError("ground cluster size changes from " + std::to_string(flow.ground_dim) + " to " +
                                     std::to_string(g) + " at t = " + std::to_string(grid[k]));
        }
        if (g >= static_cast<std::size_t>(n))
            throw GapClosureError("no spectrum above the ground cluster at t = " + std::to_string(grid[k]));
        const double gap = es.values(static_cast<Eigen::Index>(g)) - es.values(static_cast<Eigen::Index>(g) - 1);
        if (!(gap > 0.0)) throw GapClosureError("gap closes at t = " + std::to_string(grid[k]));
        flow.gap.push_back(gap);
        flow.gap_min = std::min(flow.gap_min, gap);
        flow.ground_projector.push_back(projector_from(es.vectors, g));
        flow.eigenvalues.push_back(std::move(es.values));
        flow.eigenvectors.push_back(std::move(es.vectors));
    }
    return flow;
}

Matrix ground_projector_derivative(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim) {
    return projector_derivative(eigensystem_at(h, t), h.derivative(t), ground_dim);
}

Matrix h_ad(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim) {
    const auto es = eigensystem_at(h, t);
    return h.evaluate(t) - hdiff_from(es, h.derivative(t), ground_dim);
}

double intertwining_defect(const Propagator& u_ad, const SpectralFlow& flow) {
    if (u_ad.size() != flow.grid.size()) throw ValidationError("propagator and flow grids differ");
    const Matrix& g0 = flow.ground_projector.front();
    double defect = 0.0;
    for (std::size_t k = 0; k < u_ad.size(); ++k) {
        Matrix diff = u_ad[k] * g0 * u_ad[k].adjoint() - flow.ground_projector[k];
        defect = std::max(defect, operator_norm(0.5 * (diff + diff.adjoint())));
    }
    return defect;
}

AdiabaticPropagator evolve_adiabatic(const TimeDependentHamiltonian& h, const SpectralFlow& flow,
                                     const EvolveOptions& options) {
    const std::size_t g = flow.ground_dim;
    std::optional<double> t_max = h.total_time();
    Generator gen = [&h, g, t_max](double t) { return h_ad(h, t_max ? std::min(t, *t_max) : t, g); };
    auto u_ad = evolve(gen, h.dimension(), flow.grid, options);
    const double defect = intertwining_defect(u_ad, flow);
    if (defect > 10.0 * options.tol)
        throw NumericalError("intertwining defect " + std::to_string(defect) +
                             " exceeds 10x the integration tolerance; refine the grid");
    return {std::move(u_ad), defect};
}

std::vector<double> hdiff_running_integral(const TimeDependentHamiltonian& h, const TimeGrid& grid,
                                           std::size_t ground_dim) {
    auto norm_at = [&](double t) { return operator_norm(hdiff_from(eigensystem_at(h, t), h.derivative(t), ground_dim)); };
    std::vector<double> out(grid.size(), 0.0);
    double left = norm_at(grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double right = norm_at(grid[k]);
        const double mid = norm_at(0.5 * (grid[k - 1] + grid[k]));
        out[k] = out[k - 1] + (grid[k] - grid[k - 1]) * (left + 4.0 * mid + right) / 6.0;
        left = right;
    }
    return out;
}

Matrix kernel_k(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim, const Matrix& u_ad) {
    const auto es = eigensystem_at(h, t);
    return u_ad.adjoint() * hdiff_from(es, h.derivative(t), ground_dim) * u_ad;
}

WaveOperatorErrors wave_operator_errors(const Propagator& u, const Propagator& u_ad, const SpectralFlow& flow) {
    if (u.size() != u_ad.size() || u.size() != flow.grid.size())
        throw ValidationError("wave_operator_errors: checkpoints of U, U_ad and the flow do not align");
    for (std::size_t k = 0; k < u.size(); ++k)
        if (u.grid[k] != u_ad.grid[k]) throw ValidationError("wave_operator_errors: checkpoint times differ");

    WaveOperatorErrors out;
    const auto n = u[0].rows();
    const Matrix id = Matrix::Identity(n, n);
    out.delta.reserve(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out.delta.push_back(operator_norm(id - u_ad[k].adjoint() * u[k]));

    const std::size_t g = flow.ground_dim;
    const Matrix& gt = flow.ground_projector.back();
    const Matrix& ut = u.final();
    out.mixed_ground = g > 1;
    if (g == 1) {
        const Vector psi = ut * flow.eigenvectors.front().col(0);
        out.delta_ad_final = 1.0 - std::abs(psi.dot(gt * psi));
    } else {
        const Matrix rho = ut * (flow.ground_projector.front() / static_cast<double>(g)) * ut.adjoint();
        out.delta_ad_final = 1.0 - std::real((gt * rho).trace());
    }
    out.delta_ad_final = std::clamp(out.delta_ad_final, 0.0, 1.0);
    return out;
}

Matrix hdiff_in_eigenbasis(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim) {
    const auto es = eigensystem_at(h, t);
    const Matrix d = hdiff_from(es, h.derivative(t), ground_dim);
    Matrix de = es.vectors.adjoint() * d * es.vectors;
    return 0.5 * (de + de.adjoint());
}

namespace {

// Σ_{Z ∩ G ≠ ∅} ‖D_Z‖ e^{mu diam Z} over the pairwise blocks of an
// eigenbasis matrix D; mu = 0 drops the exponential.
double ground_block_sum(const Matrix& d_eig, std::size_t ground_dim, double mu) {
    const auto decomp = pairwise_decompose(d_eig);
    std::vector<Label> ground(ground_dim);
    for (std::size_t i = 0; i < ground_dim; ++i) ground[i] = i;
    const Block ground_block(std::move(ground));
    double sum = 0.0;
    for (const auto& term : decomp.terms)
        if (term.block.intersects(ground_block))
            sum += term.norm * std::exp(mu * static_cast<double>(term.block.diameter()));
    return sum;
}

}  // namespace

double instantaneous_locality(const TimeDependentHamiltonian& h, double t, std::size_t ground_dim, double mu) {
    if (!(mu >= 0.0)) throw DomainError("instantaneous_locality: mu must be nonnegative");
    return ground_block_sum(hdiff_in_eigenbasis(h, t, ground_dim), ground_dim, mu) /
           static_cast<double>(ground_dim);
}

ConditionReport condition_report(const TimeDependentHamiltonian& h, const SpectralFlow& flow,
                                 const LocalityCertificate& certificate) {
    const std::size_t m = flow.grid.size();
    const std::size_t g = flow.ground_dim;
    const double dmin = flow.gap_min;
    const double mu = certificate.mu;

    ConditionReport r{};
    r.gap_min = dmin;
    r.ground_dim = g;
    r.mu = mu;
    r.hdiff_norm.resize(m);
    r.hdot_over_gap.resize(m);
    r.block_sum.resize(m);
    double max_hdot = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double t = flow.grid[k];
        const Matrix hdot = h.derivative(t);
        const Eigensystem es{flow.eigenvalues[k], flow.eigenvectors[k]};
        const Matrix d = hdiff_from(es, hdot, g);
        Matrix d_eig = es.vectors.adjoint() * d * es.vectors;
        d_eig = 0.5 * (d_eig + d_eig.adjoint());
        const double hdot_norm = operator_norm(hdot);
        max_hdot = std::max(max_hdot, hdot_norm);
        r.hdiff_norm[k] = operator_norm(d);
        r.hdot_over_gap[k] = hdot_norm / dmin;
        r.block_sum[k] = ground_block_sum(d_eig, g, 0.0);
        if (r.hdiff_norm[k] > r.hdot_over_gap[k] + 1e-9) ++r.norm_inequality_violations;
        if (r.block_sum[k] < r.hdiff_norm[k] - 1e-9) ++r.block_sum_violations;
    }
    const double max_hdiff = *std::max_element(r.hdiff_norm.begin(), r.hdiff_norm.end());
    const double max_block = *std::max_element(r.block_sum.begin(), r.block_sum.end());
    const double scale = mu * static_cast<double>(g) * dmin;
    r.eq8_ratio = max_hdiff / dmin;
    r.eq9_ratio = max_hdot / (dmin * dmin);
    r.eq11_ratio = certificate.v_lr_max / dmin;
    r.eq12_block_sum = max_block / scale;
    r.eq12_norm = max_hdiff / scale;
    r.epsilon_tilde = r.eq11_ratio;
    r.epsilon = static_cast<double>(g) * mu * r.epsilon_tilde;
    return r;
}

AdiabaticRun run_adiabatic(const TimeDependentHamiltonian& h, const TimeGrid& grid, const EvolveOptions& options,
                           double cluster_tol) {
    auto flow = spectral_flow(h, grid, cluster_tol);
    auto u = evolve(h, grid, options);
    auto ad = evolve_adiabatic(h, flow, options);
    auto errors = wave_operator_errors(u, ad.u_ad, flow);
    return AdiabaticRun{std::move(flow),        std::move(u),          std::move(ad.u_ad),
                        std::move(errors.delta), errors.delta_ad_final, ad.intertwining_defect,
                        errors.mixed_ground};
}

}  // namespace lrlab
