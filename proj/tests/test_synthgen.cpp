#include <doctest.h>

#include <cmath>

#include "mechindep/criteria.hpp"
#include "mechindep/errors.hpp"
#include "mechindep/factor_graphs.hpp"
#include "mechindep/synthgen.hpp"
#include "oracle.hpp"

using namespace mechindep;

namespace {

OverlapTemplate make_template(std::size_t slots, double overlap, std::uint64_t seed) {
    OverlapTemplate t;
    t.slots = slots;
    t.overlap = overlap;
    t.seed = seed;
    return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
    return worst;
}

}  // namespace

TEST_CASE("pairwise row allocation") {
    OverlapTemplate t;
    CHECK(t.pairwise_rows() == 0);
    t.overlap = 0.5;
    CHECK(t.pairwise_rows() == 20);
    t.overlap = 0.2;
    CHECK(t.pairwise_rows() == 5);
    t.overlap = 0.001;
    CHECK(t.pairwise_rows() == 1);
    t.overlap = 1.0;
    CHECK_THROWS_AS(t.pairwise_rows(), InvalidInput);
    t.overlap = 0.6;
    CHECK_THROWS_AS(gen_overlap_jacobian(t), InvalidInput);
}

TEST_CASE("template json round trip") {
    const auto t = make_template(3, 0.2, 99);
    const auto back = OverlapTemplate::from_json(t.to_json());
    CHECK(back.slots == 3);
    CHECK(back.overlap == 0.2);
    CHECK(back.seed == 99);
    CHECK_THROWS_AS(OverlapTemplate::from_json(Json::parse(R"({"slotDim": 2})")), InvalidInput);
}

TEST_CASE("generation is reproducible") {
    const auto a = gen_overlap_jacobian(make_template(3, 0.2, 5));
    const auto b = gen_overlap_jacobian(make_template(3, 0.2, 5));
    CHECK(a.jacobian == b.jacobian);
    CHECK(a.sidecar() == b.sidecar());
    const auto c = gen_overlap_jacobian(make_template(3, 0.2, 6));
    CHECK_FALSE(a.jacobian == c.jacobian);
    for (double v : a.jacobian.data())
        if (v != 0.0) CHECK((std::abs(v) >= 0.5 && std::abs(v) <= 2.0));
}

TEST_CASE("planted overlap patterns") {
    const auto zero = gen_overlap_jacobian(make_template(2, 0.0, 1));
    CHECK(zero.jacobian.rows() == 40);
    CHECK(check_type_d(zero.jacobian, zero.blocks).holds);
    CHECK(components(build_graph(zero.jacobian, GraphKind::D)).size() == 2);
    CHECK(zero.expected.type_d);
    CHECK(zero.expected.column_components == 2);

    const auto half = gen_overlap_jacobian(make_template(2, 0.5, 1));
    CHECK(half.jacobian.rows() == 60);
    CHECK_FALSE(check_type_d(half.jacobian, half.blocks).holds);
    CHECK(check_type_m(half.jacobian, half.blocks).holds);
    CHECK(half.sidecar()["allocation"]["pairwiseRows"] == 20);

    const auto path = gen_overlap_jacobian(make_template(3, 0.2, 1));
    REQUIRE(path.row_groups.size() == 5);
    CHECK(path.row_groups[1].slots == std::vector<std::size_t>{1, 2});
    CHECK(path.row_groups[3].slots == std::vector<std::size_t>{2, 3});
    // Block-level adjacency of G^D: blocks touch iff some column pair shares a row.
    const auto g = build_graph(path.jacobian, GraphKind::D);
    const auto touches = [&](std::size_t x, std::size_t y) {
        for (auto a : path.blocks.columns(x))
            for (auto b : path.blocks.columns(y))
                if (g.has_edge(a + 1, b + 1)) return true;
        return false;
    };
    CHECK(touches(0, 1));
    CHECK(touches(1, 2));
    CHECK_FALSE(touches(0, 2));
    CHECK(path.expected.block_edges == std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {2, 3}});
}

TEST_CASE("overlap-zero pipeline recovers the planted blocks") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        OverlapTemplate t = make_template(3, 0.0, seed);
        t.slot_dim = 2;
        t.slot_out = 4;
        const auto inst = gen_overlap_jacobian(t);
        const auto comps = components(build_graph(inst.jacobian, GraphKind::D));
        REQUIRE(comps.size() == 3);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(comps[k] == std::vector<std::size_t>{2 * k + 1, 2 * k + 2});
            CHECK(check_type_d_irreducible(inst.jacobian, inst.blocks, k).holds);
        }
    }
}

TEST_CASE("random mixings") {
    const BlockSpec pair({1, 1});
    const auto diag = random_mixing(pair, MixingKind::block_diagonal, 3);
    CHECK(diag.matrix(0, 1) == 0.0);
    CHECK(diag.matrix(1, 0) == 0.0);
    CHECK(diag.matrix(0, 0) != 0.0);
    CHECK(diag.matrix(1, 1) != 0.0);

    const BlockSpec two({2, 2});
    bool saw_swap = false;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto perm = random_mixing(two, MixingKind::block_permuted, seed);
        CHECK(perm.matrix == random_mixing(two, MixingKind::block_permuted, seed).matrix);
        const auto got = extract_assignment(perm.matrix, two, two);
        REQUIRE(got.sigma);
        CHECK(*got.sigma == perm.block_map);
        saw_swap |= perm.block_map == std::vector<std::size_t>{2, 1};
    }
    CHECK(saw_swap);

    const auto full = random_mixing(two, MixingKind::full, 1);
    CHECK_FALSE(extract_assignment(full.matrix, two, two).sigma);

    // Unequal blocks are never swapped.
    const auto uneven = random_mixing(BlockSpec({1, 2}), MixingKind::block_permuted, 4);
    CHECK(uneven.block_map == std::vector<std::size_t>{1, 2});
}

TEST_CASE("block-permuted mixing keeps the G^D components") {
    OverlapTemplate t = make_template(2, 0.0, 8);
    t.slot_dim = 2;
    t.slot_out = 5;
    const auto inst = gen_overlap_jacobian(t);
    const auto r = random_mixing(inst.blocks, MixingKind::block_permuted, 2);
    const auto before = components(build_graph(inst.jacobian, GraphKind::D));
    const auto after = components(build_graph(inst.jacobian * r.matrix, GraphKind::D));
    CHECK(before.size() == after.size());
}

TEST_CASE("finite-difference Jacobians") {
    const EvalFunction square = [](std::span<const double> s) {
        return std::vector<double>{s[0] * s[0], s[1]};
    };
    const std::vector<double> p{1, 2};
    CHECK(max_abs_diff(fd_jacobian(square, p), Matrix{{2, 0}, {0, 1}}) < 1e-8);

    const Matrix lin{{1, -2, 3}, {0.5, 4, -1}};
    const EvalFunction linear = [&](std::span<const double> s) { return lin * s; };
    const std::vector<double> q{0.3, -1.2, 2.0};
    CHECK(max_abs_diff(fd_jacobian(linear, q), lin) < 1e-9);

    const EvalFunction product = [](std::span<const double> s) { return std::vector<double>{s[0] * s[1]}; };
    const std::vector<double> r{2, 3};
    CHECK(max_abs_diff(fd_jacobian(product, r), Matrix{{3, 2}}) < 1e-8);

    CHECK_THROWS_AS(fd_jacobian(product, r, 0.0), InvalidInput);
    const EvalFunction bad = [](std::span<const double>) { return std::vector<double>{NAN}; };
    CHECK_THROWS_AS(fd_jacobian(bad, r), EvalError);

    // Halving the step cuts the error by about four.
    const EvalFunction smooth = [](std::span<const double> s) {
        return std::vector<double>{std::sin(s[0]) * std::exp(s[1])};
    };
    const std::vector<double> x{0.7, 0.2};
    const Matrix exact{{std::cos(0.7) * std::exp(0.2), std::sin(0.7) * std::exp(0.2)}};
    const double e1 = max_abs_diff(fd_jacobian(smooth, x, 1e-2), exact);
    const double e2 = max_abs_diff(fd_jacobian(smooth, x, 5e-3), exact);
    CHECK(e2 <= 0.3 * e1);
}

TEST_CASE("finite-difference Hessians") {
    const std::vector<std::size_t> i01{0, 1}, i00{0, 0}, i11{1, 1};
    const EvalFunction additive = [](std::span<const double> s) {
        return std::vector<double>{std::sin(s[0]) + s[1] * s[1] * s[1]};
    };
    const std::vector<double> p{0.4, -0.8};
    CHECK(std::abs(fd_hessian(additive, p).at(0, i01)) < 1e-4);

    const EvalFunction product = [](std::span<const double> s) { return std::vector<double>{s[0] * s[1]}; };
    CHECK(fd_hessian(product, p).at(0, i01) == doctest::Approx(1.0).epsilon(1e-6));

    const EvalFunction quad = [](std::span<const double> s) {
        return std::vector<double>{3 * s[0] * s[0] - 2 * s[0] * s[1] + 0.5 * s[1] * s[1]};
    };
    const auto h = fd_hessian(quad, p);
    CHECK(std::abs(h.at(0, i00) - 6) < 1e-6);
    CHECK(std::abs(h.at(0, i01) + 2) < 1e-6);
    CHECK(std::abs(h.at(0, i11) - 1) < 1e-6);
    CHECK(h.asymmetry() == 0.0);
}

TEST_CASE("planted generators") {
    const Matrix w{{1, 0}, {2, -1}, {0, 3}};
    const auto g = planted_generator(w);
    const std::vector<double> origin{0, 0};
    CHECK(max_abs_diff(fd_jacobian(g, origin), w) < 1e-8);
    const std::vector<double> x{0.3, -0.2};
    const auto analytic = planted_generator_hessian(w, x);
    const auto numeric = fd_hessian(g, x);
    for (std::size_t k = 0; k < analytic.entries().size(); ++k)
        CHECK(std::abs(analytic.entries()[k] - numeric.entries()[k]) < 1e-5);

    const BlockSpec slots({2, 2});
    const std::vector<double> s{0.1, -0.3, 0.5, 0.2};
    const auto plain = fd_hessian(random_additive_function(slots, 3, 7), s);
    CHECK(check_type_h(plain, slots, Tolerance{1e-9, 1e-4}).holds);
    const auto mixed = fd_hessian(random_additive_function(slots, 3, 7, 0.5), s);
    const std::vector<std::size_t> cross{0, 2};
    CHECK(mixed.at(0, cross) == doctest::Approx(0.5).epsilon(1e-4));
}
