#include <doctest.h>

#include <random>

#include "lrlab/adiabatic.hpp"
#include "lrlab/errors.hpp"
#include "oracles.hpp"

using namespace lrlab;

namespace {

Matrix ground_projector_at(const TimeDependentHamiltonian& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.evaluate(t));
    const Vector g = es.eigenvectors().col(0);
    return g * g.adjoint();
}

}  // namespace

TEST_CASE("spectral flow of the 11-level example") {
    const double T = 50.0;
    const auto h = build_eleven_level_example(T);
    const auto grid = TimeGrid::uniform(T, 2001);
    const auto flow = spectral_flow(h, grid);
    CHECK(flow.ground_dim == 1);
    CHECK(std::abs(flow.gap.front() - 0.1) < 1e-9);
    CHECK(flow.gap_min >= 0.095);
    CHECK(flow.gap_min <= 0.105);
    CHECK(flow.min_overlap >= 0.99);
    for (std::size_t k = 0; k < grid.size(); k += 100) {
        const Matrix& g = flow.ground_projector[k];
        CHECK((g * g - g).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(hermiticity_defect(g) < 1e-10);
        CHECK(std::abs(g.trace().real() - 1.0) < 1e-10);
        CHECK((g - ground_projector_at(h, grid[k])).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("spectral flow failures") {
    // Two levels swap at t = T/2: the ground cluster doubles there.
    Matrix hi = Matrix::Zero(2, 2), hf = Matrix::Zero(2, 2);
    hi(0, 0) = 0.0;
    hi(1, 1) = 1.0;
    hf(0, 0) = 1.0;
    hf(1, 1) = 0.0;
    const auto crossing = TimeDependentHamiltonian::linear(hi, hf, 1.0);
    CHECK_THROWS_AS(spectral_flow(crossing, TimeGrid::uniform(1.0, 11)), LevelCrossingError);

    const auto flat = TimeDependentHamiltonian::constant(Matrix::Identity(3, 3));
    CHECK_THROWS_AS(spectral_flow(flat, TimeGrid::uniform(1.0, 5)), GapClosureError);
}

TEST_CASE("constant Hamiltonian is trivially adiabatic") {
    std::mt19937_64 rng(41);
    const Matrix m = oracle::random_hermitian(rng, 5);
    const auto h = TimeDependentHamiltonian::constant(m);
    const auto grid = TimeGrid::uniform(2.0, 21);
    const auto flow = spectral_flow(h, grid);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK((flow.ground_projector[k] - flow.ground_projector[0]).norm() < 1e-12);
        CHECK(flow.gap[k] == doctest::Approx(flow.gap[0]));
    }
    CHECK(ground_projector_derivative(h, 0.7, 1).norm() == 0.0);
    CHECK((h_ad(h, 0.7, 1) - m).norm() == 0.0);

    const auto run = run_adiabatic(h, grid, EvolveOptions{});
    for (double d : run.delta) CHECK(d < 1e-12);
    CHECK(run.delta_ad_final < 1e-12);
    CHECK(run.intertwining_defect < 1e-12);
    CHECK(operator_norm(kernel_k(h, 1.0, 1, run.u_ad[10])) == 0.0);
    CHECK(instantaneous_locality(h, 1.0, 1, 0.5) == 0.0);

    const auto cert = certify(h, 0.5, grid, Permutation::identity(5));
    const auto rep = condition_report(h, flow, cert);
    CHECK(rep.eq8_ratio == 0.0);
    CHECK(rep.eq9_ratio == 0.0);
}

TEST_CASE("ground projector derivative") {
    const double T = 40.0;
    const auto h = build_eleven_level_example(T);
    const double step = T * 1e-6;
    for (double t : {0.0, 5.0, 20.0, 33.3, T}) {
        const Matrix gdot = ground_projector_derivative(h, t, 1);
        const Matrix g = ground_projector_at(h, t);
        Matrix fd;
        if (t == 0.0) {
            fd = (-3.0 * g + 4.0 * ground_projector_at(h, step) - ground_projector_at(h, 2 * step)) / (2 * step);
        } else if (t == T) {
            fd = (3.0 * g - 4.0 * ground_projector_at(h, T - step) + ground_projector_at(h, T - 2 * step)) / (2 * step);
        } else {
            fd = (ground_projector_at(h, t + step) - ground_projector_at(h, t - step)) / (2 * step);
        }
        const double scale = std::max(operator_norm(gdot), 1e-12);
        CHECK(operator_norm(gdot - fd) <= 1e-6 * scale + 1e-9);
        CHECK(hermiticity_defect(gdot) < 1e-12);
        CHECK((gdot * g + g * gdot - gdot).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((g * gdot * g).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("adiabatic Hamiltonian structure") {
    const double T = 30.0;
    const auto h = build_eleven_level_example(T);
    for (double t : {0.0, 10.0, 29.0}) {
        const Matrix had = h_ad(h, t, 1);
        CHECK(hermiticity_defect(had) < 1e-10);
        const Matrix diff = had - h.evaluate(t);
        const Matrix g = ground_projector_at(h, t);
        const Matrix gp = Matrix::Identity(11, 11) - g;
        CHECK((g * diff * g).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((gp * diff * gp).cwiseAbs().maxCoeff() < 1e-9);

        // The same statement in the instantaneous eigenbasis: only the first
        // row and column of H - H_ad are populated.
        const Matrix eig = hdiff_in_eigenbasis(h, t, 1);
        CHECK(std::abs(eig(0, 0)) < 1e-9);
        CHECK(eig.bottomRightCorner(10, 10).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(operator_norm(eig) - operator_norm(diff)) < 1e-10);
    }

    // ‖H - H_ad‖ and the eigenbasis block sum scale as 1/T at fixed s.
    const auto h2 = build_eleven_level_example(2 * T);
    for (double s : {0.1, 0.5, 0.9}) {
        const double n1 = operator_norm(h_ad(h, s * T, 1) - h.evaluate(s * T));
        const double n2 = operator_norm(h_ad(h2, s * 2 * T, 1) - h2.evaluate(s * 2 * T));
        CHECK(n1 / n2 == doctest::Approx(2.0).epsilon(0.05));
        const double l1 = instantaneous_locality(h, s * T, 1, 0.5);
        const double l2 = instantaneous_locality(h2, s * 2 * T, 1, 0.5);
        CHECK(l1 / l2 == doctest::Approx(2.0).epsilon(0.05));
    }
}

TEST_CASE("intertwiner, kernel and wave operator") {
    const double T = 50.0;
    const auto h = build_eleven_level_example(T);
    const auto grid = TimeGrid::uniform(T, 501);
    EvolveOptions opts;
    const auto run = run_adiabatic(h, grid, opts);
    CHECK(run.intertwining_defect <= 1e-7);
    CHECK(run.intertwining_defect <= 10 * opts.tol);
    CHECK(run.delta.front() == 0.0);
    CHECK(run.delta_ad_final >= 0.0);
    CHECK(run.delta_ad_final <= 1.0);
    CHECK_FALSE(run.mixed_ground);

    const Matrix& g0 = run.flow.ground_projector.front();
    const Matrix gt = run.u_ad.final() * g0 * run.u_ad.final().adjoint();
    CHECK(std::abs(gt.trace().real() - run.flow.ground_projector.back().trace().real()) < 1e-8);

    std::vector<double> hdiff;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Matrix diff = h.evaluate(grid[k]) - h_ad(h, grid[k], 1);
        hdiff.push_back(operator_norm(diff));
        if (k % 100 == 0) {
            const Matrix kk = kernel_k(h, grid[k], 1, run.u_ad[k]);
            CHECK(hermiticity_defect(kk) < 1e-10);
            CHECK(std::abs(operator_norm(kk) - hdiff.back()) < 1e-10);
            CHECK((run.u_ad[k] * kk * run.u_ad[k].adjoint() - diff).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    // Grid-sample trapezoids undershoot where the inequality is nearly tight,
    // so the integral gets midpoint evaluations.
    const auto integral = hdiff_running_integral(h, grid, 1);
    const auto trapezoid = running_integral(hdiff, grid);
    CHECK(std::abs(integral.back() - trapezoid.back()) < 1e-3 * integral.back());
    const double hmax = *std::max_element(hdiff.begin(), hdiff.end());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(run.delta[k] <= integral[k] + 1e-9);
        CHECK(integral[k] <= grid[k] * hmax + 1e-9);
    }

    // delta_ad from an explicitly evolved ground state.
    const Vector psi = run.u.final() * run.flow.eigenvectors.front().col(0);
    const double leak = 1.0 - std::abs(psi.dot(run.flow.ground_projector.back() * psi));
    CHECK(std::abs(leak - run.delta_ad_final) < 1e-12);
}

TEST_CASE("slower driving reduces the adiabatic error") {
    auto dad = [](double T) {
        return run_adiabatic(build_eleven_level_example(T), TimeGrid::uniform(T, 401), EvolveOptions{}).delta_ad_final;
    };
    for (double T : {25.0, 50.0, 100.0}) CHECK(dad(2 * T) < dad(T));
}

TEST_CASE("condition report") {
    const double T = 100.0;
    const auto h = build_eleven_level_example(T);
    const auto grid = TimeGrid::uniform(T, 501);
    const auto flow = spectral_flow(h, grid);
    const auto cert = certify(h, 0.5, grid, Permutation::identity(11));
    const auto rep = condition_report(h, flow, cert);
    const double hdiff_norm = operator_norm(oracle::example_h_final() - oracle::example_h_initial());
    CHECK(std::abs(hdiff_norm - 2 * 0.5 * std::cos(M_PI / 12)) < 1e-12);
    CHECK(rep.eq9_ratio == doctest::Approx(hdiff_norm / (T * flow.gap_min * flow.gap_min)).epsilon(1e-12));
    CHECK(rep.eq9_ratio == doctest::Approx(hdiff_norm).epsilon(1e-9));
    CHECK(rep.eq11_ratio == doctest::Approx(cert.v_lr_max / flow.gap_min).epsilon(1e-14));
    CHECK(rep.epsilon_tilde == rep.eq11_ratio);
    CHECK(rep.epsilon == doctest::Approx(1 * 0.5 * rep.epsilon_tilde));
    CHECK(rep.norm_inequality_violations == 0);
    CHECK(rep.block_sum_violations == 0);
    CHECK(rep.eq12_block_sum >= rep.eq12_norm);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(rep.hdiff_norm[k] <= rep.hdot_over_gap[k] + 1e-9);
        CHECK(rep.block_sum[k] >= rep.hdiff_norm[k] - 1e-12);
    }
    CHECK(rep.eq8_ratio >= 0.0);
    CHECK(std::isfinite(rep.eq8_ratio));
}

TEST_CASE("degenerate ground clusters use the mixed-state error") {
    // Two identical copies of a driven two-level system: every level is
    // doubly degenerate along the whole path.
    Matrix hi = Matrix::Zero(4, 4);
    hi(2, 2) = hi(3, 3) = 1.0;
    Matrix hf = hi;
    hf(0, 2) = hf(2, 0) = 0.3;
    hf(1, 3) = hf(3, 1) = 0.3;
    const auto h = TimeDependentHamiltonian::linear(hi, hf, 10.0);
    const auto grid = TimeGrid::uniform(10.0, 201);
    const auto flow = spectral_flow(h, grid);
    CHECK(flow.ground_dim == 2);
    for (const auto& g : flow.ground_projector) CHECK(std::abs(g.trace().real() - 2.0) < 1e-10);
    const auto run = run_adiabatic(h, grid, EvolveOptions{});
    CHECK(run.mixed_ground);
    CHECK(run.intertwining_defect <= 1e-8);
    CHECK(run.delta_ad_final >= 0.0);
    CHECK(run.delta_ad_final <= 1.0);

    // One copy alone gives the same leakage.
    Matrix hi1 = Matrix::Zero(2, 2), hf1 = Matrix::Zero(2, 2);
    hi1(1, 1) = hf1(1, 1) = 1.0;
    hf1(0, 1) = hf1(1, 0) = 0.3;
    const auto single = run_adiabatic(TimeDependentHamiltonian::linear(hi1, hf1, 10.0), grid, EvolveOptions{});
    CHECK(run.delta_ad_final == doctest::Approx(single.delta_ad_final).epsilon(1e-8));
}
