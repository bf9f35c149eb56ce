#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lrlab/basis_blocks.hpp"
#include "lrlab/errors.hpp"
#include "oracles.hpp"

using namespace lrlab;

TEST_CASE("block basics") {
    CHECK_THROWS_AS(Block(std::vector<Label>{}), DomainError);
    const Block b{7, 0, 3, 3};
    CHECK(b.labels() == std::vector<Label>{0, 3, 7});
    CHECK(b.size() == 3);
    CHECK(diameter(Block{5}) == 0);
    CHECK(diameter(Block{0, 3, 7}) == 7);
    CHECK(diameter(Block{2, 4}) == 2);
    CHECK(Block::interval(2, 5) == Block{2, 3, 4, 5});
    CHECK(b.contains(3));
    CHECK_FALSE(b.contains(4));
    CHECK(b.intersects(Block{1, 7}));
    CHECK_FALSE(b.intersects(Block{1, 2}));
}

TEST_CASE("block distance") {
    CHECK(block_distance(Block{0, 1}, Block{4, 7}) == 3);
    CHECK(block_distance(Block{2}, Block{2, 5}) == 0);
    CHECK(block_distance(Block{0}, Block{10}) == 10);

    std::mt19937_64 rng(2);
    std::uniform_int_distribution<Label> lab(0, 30);
    std::uniform_int_distribution<int> cnt(1, 5);
    for (int s = 0; s < 200; ++s) {
        std::vector<Label> la, lb;
        for (int k = cnt(rng); k > 0; --k) la.push_back(lab(rng));
        for (int k = cnt(rng); k > 0; --k) lb.push_back(lab(rng));
        const Block a(la), b(lb);
        std::size_t brute = 1000;
        for (Label i : la)
            for (Label j : lb) brute = std::min<std::size_t>(brute, i > j ? i - j : j - i);
        CHECK(block_distance(a, b) == brute);
        CHECK(block_distance(a, b) == block_distance(b, a));
        CHECK(a.size() <= a.diameter() + 1);
        CHECK(a.diameter() <= 30);
    }
}

TEST_CASE("pairwise decomposition") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 2;
    auto dec = pairwise_decompose(d);
    REQUIRE(dec.terms.size() == 2);
    CHECK(dec.terms[0].block == Block{0});
    CHECK(dec.terms[1].block == Block{1});
    Matrix e0 = Matrix::Zero(2, 2);
    e0(0, 0) = 1;
    CHECK((dec.terms[0].embed(2) - e0).norm() == 0.0);

    Matrix p = Matrix::Zero(2, 2);
    p(0, 1) = p(1, 0) = 0.5;
    dec = pairwise_decompose(p);
    REQUIRE(dec.terms.size() == 3);
    CHECK(dec.terms[0].norm == 0.0);
    CHECK(dec.terms[1].norm == 0.0);
    CHECK(dec.terms[2].block == Block{0, 1});
    CHECK(dec.terms[2].norm == doctest::Approx(0.5).epsilon(1e-14));

    dec = pairwise_decompose(oracle::example_h_final());
    std::size_t singles = 0, pairs = 0;
    for (const auto& t : dec.terms) {
        if (t.block.size() == 1) {
            ++singles;
        } else {
            ++pairs;
            CHECK(std::abs(t.norm - 0.5) < 1e-14);
        }
    }
    CHECK(singles == 11);
    CHECK(pairs == 10);

    Matrix nh = Matrix::Zero(3, 3);
    nh(0, 2) = 1.0;
    CHECK_THROWS_AS(pairwise_decompose(nh), ValidationError);
}

TEST_CASE("pairwise decomposition round trip") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 100; ++k) {
        const Eigen::Index n = 1 + k % 32;
        const Matrix h = oracle::random_hermitian(rng, n);
        const auto dec = pairwise_decompose(h);
        CHECK((dec.reconstruct() - h).cwiseAbs().maxCoeff() <= 1e-12);
        for (const auto& t : dec.terms) {
            const Matrix full = t.embed(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    if (!t.block.contains(static_cast<Label>(i)) || !t.block.contains(static_cast<Label>(j)))
                        CHECK(full(i, j) == Complex{0.0, 0.0});
            if (t.block.size() == 2) {
                const auto i = static_cast<Eigen::Index>(t.block.min()), j = static_cast<Eigen::Index>(t.block.max());
                CHECK(std::abs(t.norm - std::abs(h(i, j))) <= 1e-14 * std::max(1.0, std::abs(h(i, j))));
            }
        }
    }
}

TEST_CASE("entries below the structural cutoff produce no term") {
    Matrix h = Matrix::Identity(3, 3);
    h(0, 2) = h(2, 0) = 1e-15;
    CHECK(pairwise_decompose(h).terms.size() == 3);
    h(0, 2) = h(2, 0) = 1e-13;
    CHECK(pairwise_decompose(h).terms.size() == 4);
}

namespace {

std::size_t permuted_bandwidth(const Matrix& h, const Permutation& p) { return bandwidth(p.apply(h)); }

bool is_bijection(const Permutation& p) {
    std::set<Label> seen(p.new_labels().begin(), p.new_labels().end());
    return seen.size() == p.size() && *seen.rbegin() == p.size() - 1;
}

}  // namespace

TEST_CASE("permutations") {
    CHECK_THROWS_AS(Permutation({0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(Permutation({0, 3}), ValidationError);
    const Permutation p({2, 0, 1});
    Matrix m = Matrix::Zero(3, 3);
    m(0, 1) = 5.0;
    const Matrix q = p.apply(m);
    CHECK(q(2, 0) == Complex{5.0, 0.0});
    CHECK(Permutation::identity(4).is_identity());
}

TEST_CASE("basis reordering") {
    std::mt19937_64 rng(4);
    const Matrix h = oracle::random_hermitian(rng, 9);
    CHECK(reorder_basis(h, ReorderStrategy::identity).is_identity());

    // Arrow matrix: level 0 couples to everything.
    Matrix arrow = Matrix::Identity(10, 10);
    for (int j = 1; j < 10; ++j) arrow(0, j) = arrow(j, 0) = 0.3 + 0.01 * j;
    const auto pa = reorder_basis(arrow, ReorderStrategy::bandwidth_greedy);
    CHECK(is_bijection(pa));
    CHECK(permuted_bandwidth(arrow, pa) <= bandwidth(arrow));

    const Matrix tri = oracle::example_h_final();
    const auto pt = reorder_basis(tri, ReorderStrategy::bandwidth_greedy);
    CHECK(is_bijection(pt));
    CHECK(permuted_bandwidth(tri, pt) == 1);

    // A scrambled tridiagonal chain is brought back to bandwidth 1.
    const Permutation scramble({4, 7, 1, 9, 0, 3, 10, 2, 8, 5, 6});
    const Matrix scrambled = scramble.apply(tri);
    CHECK(bandwidth(scrambled) > 1);
    const auto ps = reorder_basis(scrambled, ReorderStrategy::bandwidth_greedy);
    CHECK(permuted_bandwidth(scrambled, ps) == 1);

    for (int k = 0; k < 30; ++k) {
        const Matrix r = oracle::random_hermitian(rng, 3 + k % 12);
        CHECK(is_bijection(reorder_basis(r, ReorderStrategy::bandwidth_greedy)));
    }
}
