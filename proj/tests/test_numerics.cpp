#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lrlab/errors.hpp"
#include "lrlab/numerics.hpp"
#include "oracles.hpp"

using namespace lrlab;

TEST_CASE("time grid validation") {
    CHECK_THROWS_AS(TimeGrid({0.0}), ValidationError);
    CHECK_THROWS_AS(TimeGrid({0.1, 0.2}), ValidationError);
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5}), ValidationError);
    const auto g = TimeGrid::uniform(2.0, 5);
    CHECK(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
    CHECK(g[2] == doctest::Approx(1.0));
}

TEST_CASE("operator norm") {
    CHECK(operator_norm(Matrix::Identity(7, 7)) == doctest::Approx(1.0).epsilon(1e-14));

    Matrix d = Matrix::Zero(11, 11);
    for (int k = 0; k <= 10; ++k) d(k, k) = 0.1 * k;
    CHECK(std::abs(operator_norm(d) - 1.0) < 1e-12);

    std::mt19937_64 rng(7);
    const Matrix m = oracle::random_complex(rng, 8);
    const double n = operator_norm(m);
    CHECK(std::abs(n - oracle::svd_norm(m)) <= 1e-10 * n);

    // Sampled lower bound: max |Mv| over random unit vectors never exceeds
    // the norm and gets within 1e-6 once refined by power steps.
    std::normal_distribution<double> g;
    double best = 0.0;
    for (int s = 0; s < 10000; ++s) {
        Vector v(8);
        for (int i = 0; i < 8; ++i) v(i) = {g(rng), g(rng)};
        v.normalize();
        const double r = (m * v).norm();
        CHECK(r <= n * (1 + 1e-12));
        best = std::max(best, r);
    }
    Vector v = Vector::Ones(8).normalized();
    for (int it = 0; it < 500; ++it) v = (m.adjoint() * (m * v)).normalized();
    best = std::max(best, (m * v).norm());
    CHECK(std::abs(best - n) <= 1e-6);

    Matrix bad = Matrix::Identity(3, 3);
    bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(operator_norm(bad), ValidationError);
    bad(1, 2) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(operator_norm(bad), ValidationError);
}

TEST_CASE("operator norm is unitarily invariant") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        const Eigen::Index n = 2 + k % 9;
        const Matrix m = oracle::random_complex(rng, n);
        const Matrix u = oracle::random_unitary(rng, n), v = oracle::random_unitary(rng, n);
        CHECK(std::abs(operator_norm(u * m * v) - operator_norm(m)) <= 1e-10 * operator_norm(m));
    }
    // Hermitian and anti-Hermitian shortcuts agree with the Gram oracle.
    for (int k = 0; k < 20; ++k) {
        const Matrix h = oracle::random_hermitian(rng, 6);
        const Matrix a = oracle::random_anti_hermitian(rng, 6);
        CHECK(std::abs(operator_norm(h) - oracle::gram_norm(h)) <= 1e-10 * oracle::gram_norm(h));
        CHECK(std::abs(operator_norm(a) - oracle::gram_norm(a)) <= 1e-10 * oracle::gram_norm(a));
    }
}

TEST_CASE("hermitian eigensystem") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 2;
    auto es = hermitian_eigensystem(d);
    CHECK(es.values(0) == doctest::Approx(1.0));
    CHECK(es.values(1) == doctest::Approx(2.0));
    CHECK(es.values(2) == doctest::Approx(3.0));

    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    es = hermitian_eigensystem(x);
    CHECK(es.values(0) == doctest::Approx(-1.0));
    CHECK(es.values(1) == doctest::Approx(1.0));

    es = hermitian_eigensystem(oracle::example_h_initial());
    for (int k = 0; k <= 10; ++k) CHECK(std::abs(es.values(k) - 0.1 * k) < 1e-14);

    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        const Matrix m = oracle::random_hermitian(rng, 2 + k);
        const auto e = hermitian_eigensystem(m);
        const double scale = operator_norm(m);
        for (Eigen::Index j = 0; j + 1 < e.values.size(); ++j) CHECK(e.values(j) <= e.values(j + 1));
        for (Eigen::Index j = 0; j < e.values.size(); ++j)
            CHECK((m * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).norm() <= 1e-10 * scale);
        const auto n = m.rows();
        CHECK((e.vectors.adjoint() * e.vectors - Matrix::Identity(n, n)).norm() <= 1e-10);
        const Matrix rebuilt = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
        CHECK((rebuilt - m).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }

    Matrix nh = Matrix::Identity(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigensystem(nh), ValidationError);
}

TEST_CASE("unitary exponential") {
    CHECK((unitary_exponential(Matrix::Zero(4, 4)) - Matrix::Identity(4, 4)).norm() < 1e-15);

    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    const Matrix a = Complex{0, -M_PI / 2} * x;
    Matrix expected(2, 2);
    expected << 0, Complex{0, -1}, Complex{0, -1}, 0;
    CHECK((unitary_exponential(a) - expected).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(5);
    for (int k = 0; k < 100; ++k) {
        const Matrix g = oracle::random_anti_hermitian(rng, 6);
        const Matrix u = unitary_exponential(g);
        CHECK((u - oracle::taylor_expm(g)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(operator_norm(u.adjoint() * u - Matrix::Identity(6, 6)) < 1e-12);
    }
    for (int k = 0; k < 100; ++k) {
        const Eigen::Index n = 1 + k % 32;
        const Matrix g = oracle::random_anti_hermitian(rng, n);
        const Matrix p = unitary_exponential(g) * unitary_exponential(-g);
        CHECK((p - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-11);
    }

    CHECK_THROWS_AS(unitary_exponential(Matrix::Identity(3, 3)), ValidationError);
}

TEST_CASE("lambert w") {
    CHECK(lambert_w(0.0) == 0.0);
    CHECK(std::abs(lambert_w(M_E) - 1.0) < 1e-12);
    const double w2 = lambert_w(std::exp(2.0));
    CHECK(std::abs(w2 - oracle::bisection_lambert_w(std::exp(2.0))) < 1e-13);
    CHECK(std::abs(w2 - 1.5571455989976) < 1e-12);
    CHECK_THROWS_AS(lambert_w(-0.1), DomainError);

    double prev = -1.0;
    for (double x = 0.0; x < 1e4; x = x * 1.3 + 0.01) {
        const double w = lambert_w(x);
        CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, x));
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("time average") {
    const auto grid = TimeGrid({0.0, 0.1, 0.35, 0.7, 1.0});
    std::vector<double> c(5, 2.5), lin;
    for (double t : grid.points()) lin.push_back(t);
    CHECK(time_average(c, grid) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(time_average(lin, grid) == doctest::Approx(0.5).epsilon(1e-15));

    const auto fine = TimeGrid::uniform(1.0, 1001);
    std::vector<double> sq;
    for (double t : fine.points()) sq.push_back(t * t);
    CHECK(std::abs(time_average(sq, fine) - 1.0 / 3.0) < 1e-6);

    const auto run = running_time_average(lin, grid);
    CHECK(run.front() == 0.0);
    for (std::size_t k = 1; k < grid.size(); ++k) CHECK(run[k] == doctest::Approx(grid[k] / 2));
    const auto integ = running_integral(lin, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(integ[k] == doctest::Approx(grid[k] * grid[k] / 2));
    CHECK_THROWS(time_average(std::vector<double>(3, 1.0), grid));
}

TEST_CASE("bandwidth") {
    CHECK(bandwidth(oracle::example_h_initial()) == 0);
    CHECK(bandwidth(oracle::example_h_final()) == 1);
}
