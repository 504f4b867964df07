#include "mechindep/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>

#include "mechindep/errors.hpp"
#include "mechindep/factor_graphs.hpp"
#include "mechindep/linalg.hpp"

namespace mechindep {

namespace {

Certificate make_certificate(Criterion criterion, std::string digest_hex) {
    Certificate c;
    c.criterion = criterion;
    c.inputs_digest = std::move(digest_hex);
    return c;
}

void require_block(const BlockSpec& blocks, std::size_t block) {
    if (block >= blocks.count())
        throw InvalidInput("block " + std::to_string(block + 1) + " out of range (" +
                           std::to_string(blocks.count()) + " blocks)");
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& zero_based) {
    std::vector<std::size_t> out;
    out.reserve(zero_based.size());
    for (std::size_t k : zero_based) out.push_back(k + 1);
    return out;
}

std::vector<SupportMask> nonempty_supports(const Matrix& j, const Tolerance& tol) {
    auto sup = column_supports(j, tol);
    for (std::size_t c = 0; c < sup.size(); ++c)
        if (sup[c].empty())
            throw DegenerateColumn(c + 1, "column " + std::to_string(c + 1) +
                                              " is zero; non-inclusion is undefined for an "
                                              "empty support");
    return sup;
}

Json basis_json(const BasisSearchResult& basis) {
    Json supports = Json::array();
    for (const auto& v : basis.vectors) supports.push_back(to_json(v.support));
    return {{"cost", basis.cost},
            {"coefficients", to_json(basis.coefficient_matrix())},
            {"supports", supports},
            {"mixing", basis.mixing}};
}

// Calls f(first, second) for every split of `items` into two nonempty parts
// with items[0] in the first part. Stops when f returns true.
bool for_each_split(const std::vector<std::size_t>& items,
                    const std::function<bool(const std::vector<std::size_t>&,
                                             const std::vector<std::size_t>&)>& f) {
    if (items.size() < 2) return false;
    if (items.size() > 24) throw SizeError("split enumeration refuses more than 24 items");
    const std::size_t free_items = items.size() - 1;
    const std::uint64_t limit = (std::uint64_t{1} << free_items) - 1;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        std::vector<std::size_t> first{items[0]};
        std::vector<std::size_t> second;
        for (std::size_t k = 0; k < free_items; ++k)
            (mask >> k & 1U ? first : second).push_back(items[k + 1]);
        if (f(first, second)) return true;
    }
    return false;
}

std::set<std::size_t> blocks_touched(const std::vector<std::size_t>& index, const BlockSpec& blocks) {
    std::set<std::size_t> out;
    for (std::size_t a : index) out.insert(blocks.block_of(a));
    return out;
}

Criterion h_criterion(std::size_t order) {
    if (order == 2) return Criterion::H2;
    if (order == 3) return Criterion::H3;
    throw InvalidInput("Type H checks support derivative orders 2 and 3");
}

void check_tensor(const DerivativeTensor& t, const BlockSpec& blocks, const Tolerance& tol) {
    h_criterion(t.order());
    blocks.require_columns(t.inputs());
    const double asym = t.asymmetry();
    if (asym > tol.threshold(t.max_abs()))
        throw InvalidInput("derivative tensor is not symmetric (deviation " + std::to_string(asym) +
                           ")");
}

}  // namespace

Certificate check_type_d(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::D, digest(j));
    const auto sup = column_supports(j, tol);
    for (std::size_t a = 0; a < j.cols(); ++a)
        for (std::size_t b = a + 1; b < j.cols(); ++b) {
            if (blocks.block_of(a) == blocks.block_of(b)) continue;
            const auto shared = sup[a].intersection(sup[b]);
            if (shared.empty()) continue;
            c.holds = false;
            c.witness = {{"pair", {a + 1, b + 1}},
                         {"blocks", {blocks.block_of(a) + 1, blocks.block_of(b) + 1}},
                         {"sharedRows", to_json(shared)}};
            return c;
        }
    c.holds = true;
    Json unions = Json::array();
    for (std::size_t k = 0; k < blocks.count(); ++k) {
        SupportMask u(j.rows());
        for (std::size_t col : blocks.columns(k)) u = u.united(sup[col]);
        unions.push_back(to_json(u));
    }
    c.witness = {{"blockSupports", unions}};
    if (blocks.count() == 1) c.notes.push_back("single block: holds vacuously");
    return c;
}

Certificate check_type_d_irreducible(const Matrix& j, const BlockSpec& blocks, std::size_t block,
                                     const Tolerance& tol, std::size_t cap) {
    blocks.require_columns(j.cols());
    require_block(blocks, block);
    auto c = make_certificate(Criterion::D_irreducible, digest(j));
    c.witness["block"] = block + 1;
    const Matrix sub = j.select_columns(blocks.columns(block));
    if (sub.cols() == 1) {
        if (sub.max_abs() <= tol.abs)
            throw DegenerateColumn(blocks.first(block) + 1, "one-dimensional block has a zero column");
        c.holds = true;
        c.notes.push_back("one-dimensional block with a nonzero column is irreducible");
        return c;
    }
    const double thr = tol.threshold(sub.max_abs());
    std::size_t occupied = 0;
    for (std::size_t r = 0; r < sub.rows(); ++r)
        if (linalg::max_abs(sub.row(r)) > thr) ++occupied;

    if (occupied <= cap) {
        const auto splits = rank_additive_partitions(sub, 2, tol, cap);
        c.holds = splits.empty();
        if (!c.holds) {
            c.witness["split"] = {to_json(splits.front().groups[0]),
                                  to_json(splits.front().groups[1])};
        }
        c.notes.push_back("exhaustive over all " + std::to_string(occupied) +
                          "-row 2-splits of the occupied rows");
    } else {
        const auto comps = row_matroid_components(sub, tol);
        c.holds = comps.groups.size() == 1;
        if (!c.holds) {
            SupportMask rest(sub.rows());
            for (std::size_t g = 1; g < comps.groups.size(); ++g) rest = rest.united(comps.groups[g]);
            c.witness["split"] = {to_json(comps.groups[0]), to_json(rest)};
        }
        c.notes.push_back("occupied rows above the split-search cap; verdict from row-matroid "
                          "components");
    }
    return c;
}

Certificate check_type_m(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::M, digest(j));
    const auto sup = nonempty_supports(j, tol);
    for (std::size_t a = 0; a < j.cols(); ++a)
        for (std::size_t b = a + 1; b < j.cols(); ++b) {
            if (blocks.block_of(a) == blocks.block_of(b) || pitchfork(sup[a], sup[b])) continue;
            const bool a_inside = sup[a].is_subset_of(sup[b]);
            c.holds = false;
            c.witness = {{"pair", {a + 1, b + 1}},
                         {"blocks", {blocks.block_of(a) + 1, blocks.block_of(b) + 1}},
                         {"contained", a_inside ? a + 1 : b + 1},
                         {"container", a_inside ? b + 1 : a + 1},
                         {"supports", {to_json(sup[a]), to_json(sup[b])}}};
            return c;
        }
    c.holds = true;
    Json all = Json::array();
    for (const auto& s : sup) all.push_back(to_json(s));
    c.witness = {{"supports", all}};
    return c;
}

Certificate check_type_m_rows(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::M, digest(j));
    const auto col_sup = nonempty_supports(j, tol);
    // Columns active on each row.
    std::vector<std::vector<std::size_t>> row_cols(j.rows());
    for (std::size_t col = 0; col < j.cols(); ++col)
        for (std::size_t r : col_sup[col].members()) row_cols[r - 1].push_back(col + 1);

    for (std::size_t k = 0; k < j.cols(); ++k) {
        SupportMask common = SupportMask::full(j.cols());
        for (std::size_t r : col_sup[k].members())
            common = common.intersection(SupportMask(j.cols(), row_cols[r - 1]));
        for (std::size_t other : common.members()) {
            if (blocks.block_of(other - 1) == blocks.block_of(k)) continue;
            c.holds = false;
            c.witness = {{"column", k + 1},
                         {"rows", to_json(col_sup[k])},
                         {"commonColumns", to_json(common)},
                         {"foreignColumn", other}};
            return c;
        }
    }
    c.holds = true;
    c.witness = {{"route", "row-intersection"}};
    return c;
}

Certificate check_type_m_irreducible(const Matrix& j, const BlockSpec& blocks, std::size_t block,
                                     const Tolerance& tol) {
    blocks.require_columns(j.cols());
    require_block(blocks, block);
    auto c = make_certificate(Criterion::M_irreducible, digest(j));
    c.witness["block"] = block + 1;
    const auto sup = nonempty_supports(j, tol);
    const auto cols = blocks.columns(block);
    if (cols.size() == 1) {
        c.holds = true;
        c.notes.push_back("one-dimensional block has no nontrivial partition");
        return c;
    }
    const bool reducible = for_each_split(cols, [&](const auto& first, const auto& second) {
        for (std::size_t a : first)
            for (std::size_t b : second)
                if (!pitchfork(sup[a], sup[b])) return false;
        c.witness["split"] = {one_based(first), one_based(second)};
        return true;
    });
    c.holds = !reducible;
    c.notes.push_back("exhaustive over all 2-partitions of the block's columns");
    return c;
}

Certificate check_type_s(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol,
                         const EnumerationCap& cap) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::S, digest(j));
    if (blocks.count() < 2) {
        c.holds = true;
        c.witness = {{"blocks", 1}};
        c.notes.push_back("single block: holds vacuously");
        return c;
    }
    const auto gap = sparsity_gap(j, blocks, tol, cap);
    c.holds = gap.independent;
    c.witness = {{"rhoPlus", gap.rho_plus},
                 {"rhoMinus", gap.rho_minus},
                 {"respectingBasis", basis_json(gap.respecting)},
                 {"mixingBasis", basis_json(gap.mixing)}};
    c.notes.push_back("exact search over the support classes of the column space");
    c.notes.push_back("rho- is taken as a minimum over support classes, assuming the infimum is "
                      "attained within each class");
    return c;
}

Certificate check_type_s_pairwise(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol,
                                  const EnumerationCap& cap) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::S_pairwise, digest(j));
    const auto table = pairwise_sparsity_gap(j, blocks, tol, cap);
    Json failing = Json::array();
    for (std::size_t a = 0; a < table.size(); ++a)
        for (std::size_t b = a + 1; b < table.size(); ++b)
            if (!table[a][b]) failing.push_back({a + 1, b + 1});
    c.holds = failing.empty();
    c.witness = {{"table", table}, {"failingPairs", failing}};
    return c;
}

Certificate check_type_s_irreducible(const Matrix& j, const BlockSpec& blocks, std::size_t block,
                                     const Tolerance& tol, const EnumerationCap& cap) {
    blocks.require_columns(j.cols());
    require_block(blocks, block);
    auto c = make_certificate(Criterion::S_irreducible, digest(j));
    c.witness["block"] = block + 1;
    const Matrix sub = j.select_columns(blocks.columns(block));
    const std::size_t d = sub.cols();
    if (d == 1) {
        c.holds = true;
        c.notes.push_back("one-dimensional block has no nontrivial split");
        return c;
    }

    const auto elementary = minimal_supports(sub, tol, cap);
    const std::size_t optimum =
        sparsest_basis(sub, BlockSpec::singletons(d), BasisMode::unconstrained, tol, cap).cost;

    // Every optimal basis made of elementary vectors (an optimal basis always is).
    constexpr std::size_t kMaxBases = 64;
    std::vector<std::vector<std::size_t>> optimal;
    std::vector<std::size_t> chosen;
    std::vector<std::vector<double>> coeffs;
    std::function<void(std::size_t, std::size_t)> search = [&](std::size_t from, std::size_t cost) {
        if (optimal.size() >= kMaxBases) return;
        if (chosen.size() == d) {
            if (cost == optimum) optimal.push_back(chosen);
            return;
        }
        const std::size_t need = d - chosen.size();
        for (std::size_t k = from; k + need <= elementary.size(); ++k) {
            std::size_t bound = cost;
            for (std::size_t q = 0; q < need; ++q) bound += elementary[k + q].support_size();
            if (bound > optimum) break;
            auto v = elementary[k].coeff;
            const double m = linalg::max_abs(v);
            for (double& e : v) e /= m;
            coeffs.push_back(std::move(v));
            if (linalg::rank_of_vectors(coeffs, std::max(tol.rel, 1e-12)) == coeffs.size()) {
                chosen.push_back(k);
                search(k + 1, cost + elementary[k].support_size());
                chosen.pop_back();
            }
            coeffs.pop_back();
        }
    };
    search(0, 0);
    if (optimal.empty()) throw InternalError("no optimal basis among elementary vectors");

    std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> tried;
    bool reducible = false;
    for (const auto& basis : optimal) {
        reducible = for_each_split(basis, [&](const auto& first, const auto& second) {
            if (!tried.insert({first, second}).second) return false;
            Matrix split(sub.rows(), d);
            std::size_t col = 0;
            for (const auto* part : {&first, &second})
                for (std::size_t k : *part) {
                    for (std::size_t r = 0; r < sub.rows(); ++r)
                        split(r, col) = elementary[k].value[r];
                    ++col;
                }
            const auto gap = sparsity_gap(split, BlockSpec({first.size(), second.size()}), tol, cap);
            if (!gap.independent) return false;
            Json u = Json::array(), v = Json::array();
            for (std::size_t k : first) u.push_back(to_json(elementary[k].support));
            for (std::size_t k : second) v.push_back(to_json(elementary[k].support));
            c.witness["split"] = {{"first", u}, {"second", v}};
            c.witness["rhoPlus"] = gap.rho_plus;
            c.witness["rhoMinus"] = gap.rho_minus;
            return true;
        });
        if (reducible) break;
    }
    c.holds = !reducible;
    c.witness["optimalCost"] = optimum;
    c.witness["optimalBasesTried"] = optimal.size();
    c.notes.push_back("candidate splits come from 2-partitions of optimal bases only: a "
                      "reducible verdict is certain, an irreducible verdict is relative to "
                      "these candidates");
    if (optimal.size() >= kMaxBases)
        c.notes.push_back("optimal-basis enumeration stopped at " + std::to_string(kMaxBases));
    return c;
}

Certificate check_type_h(const DerivativeTensor& t, const BlockSpec& blocks, const Tolerance& tol) {
    check_tensor(t, blocks, tol);
    auto c = make_certificate(h_criterion(t.order()), digest(t));
    const double thr = tol.threshold(t.max_abs());
    for (const auto& idx : t.multi_indices()) {
        const auto touched = blocks_touched(idx, blocks);
        if (touched.size() < 2) continue;
        for (std::size_t r = 0; r < t.outputs(); ++r) {
            const double v = t.at(r, idx);
            if (std::abs(v) <= thr) continue;
            c.holds = false;
            c.witness = {{"output", r + 1},
                         {"index", one_based(idx)},
                         {"value", v},
                         {"blocks", one_based({touched.begin(), touched.end()})}};
            return c;
        }
    }
    c.holds = true;
    c.witness = {{"order", t.order()}, {"threshold", thr}};
    return c;
}

Certificate check_type_h_irreducible(const DerivativeTensor& t, const BlockSpec& blocks,
                                     std::size_t block, const Tolerance& tol) {
    check_tensor(t, blocks, tol);
    require_block(blocks, block);
    auto c = make_certificate(Criterion::H_irreducible, digest(t));
    c.witness["block"] = block + 1;
    const double thr = tol.threshold(t.max_abs());
    const auto cols = blocks.columns(block);
    const auto in = [&](std::size_t a, const std::vector<std::size_t>& set) {
        return std::find(set.begin(), set.end(), a) != set.end();
    };
    // True iff every entry with first index in u and second in v vanishes.
    const auto vanishes = [&](const std::vector<std::size_t>& u, const std::vector<std::size_t>& v) {
        for (const auto& idx : t.multi_indices()) {
            if (!in(idx[0], u) || !in(idx[1], v)) continue;
            for (std::size_t r = 0; r < t.outputs(); ++r)
                if (std::abs(t.at(r, idx)) > thr) return false;
        }
        return true;
    };
    if (vanishes(cols, cols)) {
        c.holds = false;
        c.witness["reason"] = "within-block slice is zero";
        return c;
    }
    const bool reducible = for_each_split(cols, [&](const auto& first, const auto& second) {
        if (!vanishes(first, second)) return false;
        c.witness["split"] = {one_based(first), one_based(second)};
        return true;
    });
    c.holds = !reducible;
    c.notes.push_back("splits searched over standard-coordinate 2-partitions only: a reducible "
                      "verdict is certain, an irreducible verdict is relative to these splits");
    return c;
}

Certificate check_separability(const std::vector<DerivativeTensor>& tensors,
                               const BlockSpec& blocks, const Tolerance& tol) {
    if (tensors.size() < 2) throw InvalidInput("separability needs derivative orders 1..n, n >= 2");
    for (std::size_t k = 0; k < tensors.size(); ++k) {
        if (tensors[k].order() != k + 1) throw ShapeError("derivative tensors must have orders 1..n");
        if (tensors[k].outputs() != tensors[0].outputs() || tensors[k].inputs() != tensors[0].inputs())
            throw ShapeError("derivative tensors disagree on dimensions");
    }
    blocks.require_columns(tensors[0].inputs());
    const auto& top = tensors.back();
    auto c = make_certificate(Criterion::separability, digest(top));

    double scale = 0.0;
    for (const auto& t : tensors) scale = std::max(scale, t.max_abs());
    const double thr = tol.threshold(scale);

    std::vector<std::vector<std::vector<double>>> images(blocks.count());
    for (const auto& idx : top.multi_indices()) {
        const std::size_t b = blocks.block_of(idx[0]);
        if (blocks.block_of(idx[1]) == b) images[b].push_back(top.fiber(idx));
    }
    std::vector<std::vector<double>> lower;
    for (std::size_t k = 0; k + 1 < tensors.size(); ++k)
        for (const auto& idx : tensors[k].multi_indices()) lower.push_back(tensors[k].fiber(idx));

    Json per_block = Json::array();
    c.holds = true;
    for (std::size_t i = 0; i < blocks.count(); ++i) {
        auto competitors = lower;
        for (std::size_t b = 0; b < blocks.count(); ++b)
            if (b != i) competitors.insert(competitors.end(), images[b].begin(), images[b].end());
        auto all = competitors;
        all.insert(all.end(), images[i].begin(), images[i].end());
        const std::size_t r_image = linalg::rank_of_vectors(images[i], thr);
        const std::size_t r_comp = linalg::rank_of_vectors(competitors, thr);
        const std::size_t r_all = linalg::rank_of_vectors(all, thr);
        const bool ok = r_image + r_comp == r_all;
        per_block.push_back({{"block", i + 1},
                             {"imageRank", r_image},
                             {"competitorRank", r_comp},
                             {"jointRank", r_all}});
        if (r_image == 0)
            c.notes.push_back("degenerate block " + std::to_string(i + 1) +
                              ": zero within-block derivative image");
        if (!ok && c.holds) {
            c.holds = false;
            c.witness["failingBlock"] = i + 1;
        }
    }
    c.witness["order"] = tensors.size();
    c.witness["blocks"] = per_block;
    return c;
}

Certificate check_support_union(const Matrix& jg, const Matrix& jghat, const Matrix& b,
                                const Tolerance& tol) {
    if (b.rows() != b.cols()) throw ShapeError("mixing matrix must be square");
    if (jg.cols() != b.rows() || jghat.rows() != jg.rows() || jghat.cols() != b.cols())
        throw ShapeError("Jacobian and mixing shapes do not match");
    const Matrix product = jg * b;
    double worst = 0.0;
    for (std::size_t k = 0; k < product.data().size(); ++k)
        worst = std::max(worst, std::abs(product.data()[k] - jghat.data()[k]));
    if (worst > tol.threshold(std::max(product.max_abs(), jghat.max_abs())))
        throw InvalidInput("Jghat differs from Jg * B (max deviation " + std::to_string(worst) + ")");
    if (rank(b, tol) < b.cols()) throw RankError("mixing matrix is singular");

    auto c = make_certificate(Criterion::support_union, digest(jghat));
    const auto source = column_supports(jg, tol);
    const auto target = column_supports(jghat, tol);
    const auto selectors = column_supports(b, tol);
    for (std::size_t k = 0; k < b.cols(); ++k) {
        SupportMask expected(jg.rows());
        for (std::size_t i : selectors[k].members()) expected = expected.united(source[i - 1]);
        if (expected == target[k]) continue;
        c.holds = false;
        c.witness = {{"column", k + 1},
                     {"sources", to_json(selectors[k])},
                     {"support", to_json(target[k])},
                     {"union", to_json(expected)}};
        return c;
    }
    c.holds = true;
    c.witness = {{"columns", b.cols()}};
    return c;
}

Certificate check_l0_nonincrease(const Matrix& jg, const Matrix& jghat, const Tolerance& tol) {
    if (jg.rows() != jghat.rows() || jg.cols() != jghat.cols())
        throw ShapeError("Jacobians must have matching shapes");
    auto c = make_certificate(Criterion::l0_nonincrease, digest(jghat));
    const std::size_t before = l0_norm(jg, tol);
    const std::size_t after = l0_norm(jghat, tol);
    c.holds = after <= before;
    c.witness = {{"l0Jg", before}, {"l0Jghat", after}};
    return c;
}

AssignmentOutcome extract_assignment(const Matrix& b, const BlockSpec& source,
                                     const BlockSpec& target, const Tolerance& tol) {
    source.require_columns(b.rows());
    target.require_columns(b.cols());
    if (b.rows() != b.cols()) throw ShapeError("mixing matrix must be square");
    if (rank(b, tol) < b.cols()) throw RankError("mixing matrix is singular");

    AssignmentOutcome out;
    out.certificate = make_certificate(Criterion::assignment, digest(b));
    auto& c = out.certificate;
    const double thr = tol.threshold(b.max_abs());
    std::vector<std::size_t> sigma;
    for (std::size_t i = 0; i < source.count(); ++i) {
        std::vector<std::size_t> touched;
        for (std::size_t l = 0; l < target.count(); ++l) {
            bool nonzero = false;
            for (std::size_t r : source.columns(i))
                for (std::size_t col : target.columns(l)) nonzero = nonzero || std::abs(b(r, col)) > thr;
            if (nonzero) touched.push_back(l + 1);
        }
        if (touched.size() != 1) {
            c.holds = false;
            c.witness = {{"blockRow", i + 1}, {"targetBlocks", touched}};
            return out;
        }
        sigma.push_back(touched.front());
    }
    for (std::size_t l = 1; l <= target.count(); ++l)
        if (std::find(sigma.begin(), sigma.end(), l) == sigma.end()) {
            c.holds = false;
            c.witness = {{"unreachedTarget", l}, {"sigma", sigma}};
            return out;
        }
    c.holds = true;
    c.witness = {{"sigma", sigma}};
    out.sigma = std::move(sigma);
    return out;
}

double compositional_contrast(const Matrix& j, const BlockSpec& blocks) {
    blocks.require_columns(j.cols());
    double total = 0.0;
    std::vector<double> norms(blocks.count());
    for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t k = 0; k < blocks.count(); ++k) {
            double sq = 0.0;
            for (std::size_t col : blocks.columns(k)) sq += j(r, col) * j(r, col);
            norms[k] = std::sqrt(sq);
        }
        for (std::size_t a = 0; a < norms.size(); ++a)
            for (std::size_t b = a + 1; b < norms.size(); ++b) total += norms[a] * norms[b];
    }
    return total;
}

Certificate check_contrast(const Matrix& j, const BlockSpec& blocks) {
    auto c = make_certificate(Criterion::contrast, digest(j));
    const double value = compositional_contrast(j, blocks);
    c.holds = value == 0.0;
    c.witness = {{"value", value}};
    c.notes.push_back("contrast is the row-wise product of block norms summed over block pairs, "
                      "as defined in earlier compositional-contrast work");
    return c;
}

Certificate check_type_o(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::O, digest(j));
    std::vector<std::vector<double>> cols;
    for (std::size_t k = 0; k < j.cols(); ++k) cols.push_back(j.column(k));
    for (std::size_t a = 0; a < j.cols(); ++a)
        for (std::size_t b = a + 1; b < j.cols(); ++b) {
            if (blocks.block_of(a) == blocks.block_of(b)) continue;
            const double ip = linalg::dot(cols[a], cols[b]);
            if (std::abs(ip) <= tol.threshold(linalg::norm2(cols[a]) * linalg::norm2(cols[b])))
                continue;
            c.holds = false;
            c.witness = {{"pair", {a + 1, b + 1}}, {"innerProduct", ip}};
            return c;
        }
    c.holds = true;
    c.witness = {{"blocks", blocks.count()}};
    return c;
}

Certificate hierarchy_audit(const Matrix& j, const BlockSpec& blocks,
                            const std::optional<DerivativeTensor>& hessian, const Tolerance& tol,
                            const EnumerationCap& cap) {
    blocks.require_columns(j.cols());
    auto c = make_certificate(Criterion::hierarchy, digest(j));
    Json verdicts = Json::object();

    // Runs a checker; a precondition failure leaves the verdict unknown.
    const auto attempt = [&](const char* name, const std::function<Certificate()>& run)
        -> std::optional<bool> {
        try {
            const bool holds = run().holds;
            verdicts[name] = holds;
            return holds;
        } catch (const DegenerateColumn& e) {
            verdicts[name] = std::string("skipped: ") + e.what();
        } catch (const RankError& e) {
            verdicts[name] = std::string("skipped: ") + e.what();
        } catch (const SizeError& e) {
            verdicts[name] = std::string("skipped: ") + e.what();
        }
        return std::nullopt;
    };

    const bool d = check_type_d(j, blocks, tol).holds;
    verdicts["D"] = d;
    const auto m = attempt("M", [&] { return check_type_m(j, blocks, tol); });
    std::optional<SparsityGap> gap;
    const auto s = attempt("S", [&] {
        if (blocks.count() < 2) return check_type_s(j, blocks, tol, cap);
        gap = sparsity_gap(j, blocks, tol, cap);
        Certificate verdict;
        verdict.holds = gap->independent;
        return verdict;
    });
    std::optional<bool> h2;
    if (hessian) h2 = attempt("H2", [&] { return check_type_h(*hessian, blocks, tol); });
    verdicts["O"] = check_type_o(j, blocks, tol).holds;

    std::optional<bool> m_sparsest;
    if (s.value_or(false) && gap) {
        const Matrix rebased = j * gap->respecting.coefficient_matrix();
        m_sparsest = attempt("M-sparsestBasis", [&] { return check_type_m(rebased, blocks, tol); });
    }

    Json arrows = Json::array();
    Json violations = Json::array();
    const auto arrow = [&](const char* name, bool premise, std::optional<bool> conclusion) {
        std::string status;
        if (!premise) status = "vacuous";
        else if (!conclusion) status = "skipped";
        else if (*conclusion) status = "confirmed";
        else {
            status = "violated";
            violations.push_back(name);
        }
        arrows.push_back({{"arrow", name}, {"status", status}});
    };
    arrow("D=>M", d, m);
    arrow("D=>S", d, s);
    if (hessian) arrow("D=>H2", d, h2);
    arrow("S=>M (sparsest basis)", s.value_or(false), m_sparsest);

    c.holds = violations.empty();
    c.witness = {{"verdicts", verdicts}, {"arrows", arrows}, {"violations", violations}};
    if (!c.holds) c.notes.push_back("an implication arrow failed: this indicates an internal error");
    return c;
}

}  // namespace mechindep
