#include <doctest.h>

#include <functional>
#include <random>

#include "mechindep/errors.hpp"
#include "mechindep/sparse_subspace.hpp"
#include "oracle.hpp"

using namespace mechindep;

namespace {

SupportMask mask(std::size_t universe, std::vector<std::size_t> members) {
    return SupportMask(universe, std::move(members));
}

std::vector<SupportMask> masks_of(const std::vector<SubspaceVector>& vs) {
    std::vector<SupportMask> out;
    for (const auto& v : vs) out.push_back(v.support);
    return out;
}

Matrix random_full_rank(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double zero_prob) {
    for (;;) {
        Matrix m = oracle::random_sparse_integer(rows, cols, rng, zero_prob);
        if (oracle::eigen_rank(m) == static_cast<int>(cols)) return m;
    }
}

bool spans(const BasisSearchResult& r, std::size_t n) {
    return oracle::eigen_rank(r.coefficient_matrix()) == static_cast<int>(n);
}

// Upper bound on the cheapest basis that contains a mixing vector: pair each
// small-integer mixing coefficient vector with the cheapest completion drawn
// from the minimal supports.
std::size_t mixing_upper_bound(const Matrix& m, const BlockSpec& blocks) {
    const int n = static_cast<int>(m.cols());
    const auto elementary = oracle::minimal_supports(m);
    const auto e = oracle::to_eigen(m);
    std::size_t best = SIZE_MAX;
    std::vector<int> c(n, -2);
    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            std::vector<double> coeff(c.begin(), c.end());
            if (!is_mixing(coeff, blocks)) return;
            Eigen::VectorXd v(n);
            for (int i = 0; i < n; ++i) v(i) = c[i];
            const Eigen::VectorXd val = e * v;
            std::size_t cost = 0;
            for (int r = 0; r < val.size(); ++r)
                if (std::abs(val(r)) > 1e-9) ++cost;
            // Cheapest n-1 elementary vectors completing v.
            std::size_t extra = SIZE_MAX;
            std::vector<int> idx(n - 1);
            std::function<void(int, int, std::size_t)> pick = [&](int from, int depth, std::size_t acc) {
                if (acc >= extra) return;
                if (depth == n - 1) {
                    Eigen::MatrixXd g(n, n);
                    g.col(0) = v.normalized();
                    for (int q = 0; q < n - 1; ++q) g.col(q + 1) = elementary[idx[q]].coeff.normalized();
                    if (oracle::eigen_rank(g) == n) extra = acc;
                    return;
                }
                for (int q = from; q < static_cast<int>(elementary.size()); ++q) {
                    idx[depth] = q;
                    pick(q + 1, depth + 1, acc + elementary[q].size());
                }
            };
            pick(0, 0, 0);
            if (extra != SIZE_MAX) best = std::min(best, cost + extra);
            return;
        }
        for (int x = -2; x <= 2; ++x) {
            c[k] = x;
            rec(k + 1);
        }
    };
    rec(0);
    return best;
}

}  // namespace

TEST_CASE("achievable supports") {
    const Matrix m{{1, 0}, {1, 1}, {0, 1}};
    CHECK(achievable(m, mask(3, {1, 2})));
    CHECK_FALSE(achievable(m, mask(3, {1})));
    CHECK(achievable(m, mask(3, {1, 2, 3})));
    CHECK_THROWS_AS(achievable(Matrix{{1, 1}, {1, 1}}, mask(2, {1})), RankError);
}

TEST_CASE("minimal supports examples") {
    const Matrix m{{1, 0}, {1, 1}, {0, 1}};
    const auto s = masks_of(minimal_supports(m));
    REQUIRE(s.size() == 3);
    CHECK(s[0] == mask(3, {1, 2}));
    CHECK(s[1] == mask(3, {1, 3}));
    CHECK(s[2] == mask(3, {2, 3}));

    const auto col = masks_of(minimal_supports(Matrix{{1}, {1}, {1}}));
    REQUIRE(col.size() == 1);
    CHECK(col[0] == mask(3, {1, 2, 3}));

    const auto id = masks_of(minimal_supports(Matrix::identity(2)));
    REQUIRE(id.size() == 2);
    CHECK(id[0] == mask(2, {1}));
    CHECK(id[1] == mask(2, {2}));

    for (const auto& v : minimal_supports(oracle::example_d())) {
        CHECK(support(v.value) == v.support);
        CHECK(achievable(oracle::example_d(), v.support));
    }
}

TEST_CASE("minimal supports agree with a brute scan over row masks") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t cols = 1 + rng() % 4;
        const std::size_t rows = cols + rng() % 5;
        const Matrix m = random_full_rank(rows, cols, rng, 0.45);
        const auto got = minimal_supports(m);
        const auto want = oracle::minimal_supports(m);
        REQUIRE(got.size() == want.size());
        std::vector<std::uint64_t> a, b;
        for (const auto& v : got) {
            std::uint64_t bits = 0;
            for (auto r : v.support.members()) bits |= std::uint64_t{1} << (r - 1);
            a.push_back(bits);
        }
        for (const auto& v : want) b.push_back(v.support);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("size caps") {
    CHECK_THROWS_AS(minimal_supports(Matrix(21, 1, std::vector<double>(21, 1.0))), SizeError);
    EnumerationCap cap;
    cap.max_rows = 4;
    CHECK_THROWS_AS(minimal_supports(oracle::example_d(), {}, cap), SizeError);
    CHECK_THROWS_AS(sparsest_basis(Matrix{{1, 1}, {1, 1}}, BlockSpec({1, 1}), BasisMode::unconstrained),
                    RankError);
}

TEST_CASE("sparsest basis worked values") {
    const auto d = oracle::example_d();
    CHECK(sparsest_basis(d, BlockSpec({2, 2}), BasisMode::block_respecting).cost == 14);
    const std::vector<std::size_t> first{0, 1};
    CHECK(sparsest_basis(d.select_columns(first), BlockSpec({1, 1}), BasisMode::block_respecting).cost == 8);
    CHECK(sparsest_basis(Matrix::identity(2), BlockSpec({1, 1}), BasisMode::block_respecting).cost == 2);
}

TEST_CASE("sparsity gap on the golden matrices") {
    const auto a = sparsity_gap(oracle::example_a(), BlockSpec({1, 1}));
    CHECK(a.rho_plus == 12);
    CHECK(a.rho_minus == 13);
    CHECK(a.independent);

    const auto b = sparsity_gap(oracle::example_b(), BlockSpec({1, 1, 1}));
    CHECK(b.rho_plus == 9);
    CHECK(b.rho_minus == 9);
    CHECK_FALSE(b.independent);

    const auto c = sparsity_gap(oracle::example_c(), BlockSpec({1, 1, 1}));
    CHECK(c.independent);
    CHECK(c.rho_plus < c.rho_minus);

    const auto d = sparsity_gap(oracle::example_d(), BlockSpec({2, 2}));
    CHECK(d.rho_plus == 14);
    CHECK(d.independent);

    // The mixing witness must really mix and really span.
    for (const auto* g : {&a, &b, &c, &d}) {
        CHECK(std::count(g->mixing.mixing.begin(), g->mixing.mixing.end(), true) >= 1);
        CHECK(std::count(g->respecting.mixing.begin(), g->respecting.mixing.end(), true) == 0);
    }
}

TEST_CASE("pairwise sparsity gap") {
    const auto table = pairwise_sparsity_gap(oracle::example_b(), BlockSpec({1, 1, 1}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(table[i][j]);
    CHECK_FALSE(sparsity_gap(oracle::example_b(), BlockSpec({1, 1, 1})).independent);
    const auto id = pairwise_sparsity_gap(Matrix::identity(2), BlockSpec({1, 1}));
    CHECK(id[0][1]);
    CHECK(id[1][0]);
}

TEST_CASE("greedy basis matches exhaustive search over elementary vectors") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 80; ++trial) {
        const std::size_t cols = 1 + rng() % 3;
        const std::size_t rows = cols + 1 + rng() % 4;
        const Matrix m = random_full_rank(rows, cols, rng, 0.4);
        const auto r = sparsest_basis(m, BlockSpec::singletons(cols), BasisMode::unconstrained);
        CHECK(r.cost == static_cast<std::size_t>(
                            oracle::exhaustive_best_cost(oracle::minimal_supports(m), static_cast<int>(cols))));
        CHECK(spans(r, cols));
    }
}

TEST_CASE("basis search invariants") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t cols = 2 + rng() % 2;
        const std::size_t rows = cols + 1 + rng() % 3;
        const Matrix m = random_full_rank(rows, cols, rng, 0.4);
        const BlockSpec blocks = cols == 2 ? BlockSpec({1, 1}) : BlockSpec({2, 1});
        const auto free = sparsest_basis(m, blocks, BasisMode::unconstrained);
        const auto resp = sparsest_basis(m, blocks, BasisMode::block_respecting);
        const auto mix = sparsest_basis(m, blocks, BasisMode::force_mixing);
        CHECK(free.cost == std::min(resp.cost, mix.cost));
        CHECK(spans(resp, cols));
        CHECK(spans(mix, cols));

        std::size_t per_block = 0;
        for (std::size_t k = 0; k < blocks.count(); ++k) {
            const Matrix sub = m.select_columns(blocks.columns(k));
            per_block += sparsest_basis(sub, BlockSpec::singletons(sub.cols()), BasisMode::unconstrained).cost;
        }
        CHECK(resp.cost == per_block);

        std::size_t counted = 0;
        for (const auto& v : mix.vectors) counted += v.support_size();
        CHECK(counted == mix.cost);
        CHECK(mix.cost <= mixing_upper_bound(m, blocks));
    }
}
