#include "mechindep/sparse_subspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>

#include "mechindep/errors.hpp"
#include "mechindep/linalg.hpp"

namespace mechindep {

namespace {

// A flat of the row matroid: the rows where every vector of the coefficient
// subspace `null_basis` vanishes. Its support class is the complement.
struct SupportClass {
    std::uint64_t zero_rows = 0;
    std::vector<std::vector<double>> null_basis;
};

struct Candidate {
    SubspaceVector vector;
    bool mixing = false;
};

void normalize_max_abs(std::vector<double>& v) {
    const double m = linalg::max_abs(v);
    if (m > 0.0)
        for (double& e : v) e /= m;
}

void check_enumerable(const Matrix& m, const Tolerance& tol, const EnumerationCap& cap) {
    if (cap.max_rows > 64) throw InvalidInput("row cap above 64 is not supported");
    if (m.rows() > cap.max_rows)
        throw SizeError("support enumeration refuses " + std::to_string(m.rows()) +
                        " rows (cap " + std::to_string(cap.max_rows) + ")");
    if (m.cols() > cap.max_cols)
        throw SizeError("support enumeration refuses " + std::to_string(m.cols()) +
                        " columns (cap " + std::to_string(cap.max_cols) + ")");
    if (rank(m, tol) < m.cols()) throw RankError("matrix must have full column rank");
}

SupportMask mask_from_zero_rows(std::uint64_t zero_rows, std::size_t rows) {
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < rows; ++r)
        if (!(zero_rows >> r & 1U)) members.push_back(r + 1);
    return SupportMask(rows, std::move(members));
}

// Flats of rank < cols, found by a depth-first walk over independent row sets.
// With `hyperplanes_only`, only flats of rank cols - 1 are reported.
std::vector<SupportClass> enumerate_flats(const Matrix& m, double threshold,
                                          bool hyperplanes_only) {
    const std::size_t n = m.cols();
    const double closure_threshold = threshold * static_cast<double>(n);
    std::set<std::uint64_t> seen;
    std::vector<SupportClass> flats;
    std::vector<std::size_t> chosen;

    auto record = [&] {
        auto basis = linalg::null_space_of_rows(m, chosen, threshold);
        for (auto& x : basis) normalize_max_abs(x);
        std::uint64_t zero_rows = 0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            bool vanishes = true;
            for (const auto& x : basis)
                if (std::abs(linalg::dot(m.row(r), x)) > closure_threshold) {
                    vanishes = false;
                    break;
                }
            if (vanishes) zero_rows |= std::uint64_t{1} << r;
        }
        if (seen.insert(zero_rows).second) flats.push_back({zero_rows, std::move(basis)});
    };

    auto walk = [&](auto&& self, std::size_t start) -> void {
        if (!hyperplanes_only || chosen.size() + 1 == n) record();
        if (chosen.size() + 1 >= n) return;
        for (std::size_t r = start; r < m.rows(); ++r) {
            chosen.push_back(r);
            if (linalg::rank_of_rows(m, chosen, threshold) == chosen.size()) self(self, r + 1);
            chosen.pop_back();
        }
    };
    walk(walk, 0);
    return flats;
}

SubspaceVector make_vector(const Matrix& m, std::vector<double> coeff, std::uint64_t zero_rows) {
    auto value = m * coeff;
    std::size_t lead = 0;
    for (std::size_t k = 1; k < value.size(); ++k)
        if (std::abs(value[k]) > std::abs(value[lead])) lead = k;
    const double scale = value[lead];
    for (double& e : value) e /= scale;
    for (double& e : coeff) e /= scale;
    return {std::move(value), std::move(coeff), mask_from_zero_rows(zero_rows, m.rows())};
}

bool candidate_before(const Candidate& a, const Candidate& b) {
    if (a.vector.support_size() != b.vector.support_size())
        return a.vector.support_size() < b.vector.support_size();
    if (a.vector.support != b.vector.support) return a.vector.support < b.vector.support;
    return !a.mixing && b.mixing;
}

std::vector<SubspaceVector> elementary_vectors(const Matrix& m, const Tolerance& tol) {
    const double threshold = tol.threshold(m.max_abs());
    std::vector<SubspaceVector> out;
    for (auto& flat : enumerate_flats(m, threshold, true))
        out.push_back(make_vector(m, std::move(flat.null_basis.front()), flat.zero_rows));
    std::sort(out.begin(), out.end(), [](const SubspaceVector& a, const SubspaceVector& b) {
        if (a.support_size() != b.support_size()) return a.support_size() < b.support_size();
        return a.support < b.support;
    });
    return out;
}

// Adds vectors from `pool` (already sorted) while they stay linearly
// independent of `basis`, until it has `target` members. Gives up once the
// running cost reaches `cost_limit`.
struct GreedyOutcome {
    bool complete = false;
    std::size_t cost = 0;
    std::vector<std::size_t> picked;
};

GreedyOutcome greedy_complete(const std::vector<Candidate>& pool,
                              std::vector<std::vector<double>> basis, std::size_t base_cost,
                              std::size_t target, std::size_t cost_limit, double rel) {
    GreedyOutcome out;
    out.cost = base_cost;
    for (auto& b : basis) normalize_max_abs(b);
    for (std::size_t k = 0; k < pool.size() && basis.size() < target; ++k) {
        if (out.cost + pool[k].vector.support_size() >= cost_limit) break;
        auto c = pool[k].vector.coeff;
        normalize_max_abs(c);
        basis.push_back(std::move(c));
        if (linalg::rank_of_vectors(basis, std::max(rel, 1e-12)) == basis.size()) {
            out.cost += pool[k].vector.support_size();
            out.picked.push_back(k);
        } else {
            basis.pop_back();
        }
    }
    out.complete = basis.size() == target;
    return out;
}

std::vector<Candidate> candidates_for(const std::vector<SubspaceVector>& vectors,
                                      const BlockSpec& blocks, const Tolerance& tol) {
    std::vector<Candidate> pool;
    pool.reserve(vectors.size());
    for (const auto& v : vectors) pool.push_back({v, is_mixing(v.coeff, blocks, tol)});
    std::stable_sort(pool.begin(), pool.end(), candidate_before);
    return pool;
}

BasisSearchResult assemble(std::vector<SubspaceVector> vectors, const BlockSpec& blocks,
                           const Tolerance& tol) {
    BasisSearchResult result;
    for (auto& v : vectors) {
        result.cost += v.support_size();
        result.mixing.push_back(is_mixing(v.coeff, blocks, tol));
        result.vectors.push_back(std::move(v));
    }
    return result;
}

BasisSearchResult unconstrained_basis(const Matrix& m, const BlockSpec& blocks,
                                      const Tolerance& tol) {
    const auto pool = candidates_for(elementary_vectors(m, tol), blocks, tol);
    const auto outcome =
        greedy_complete(pool, {}, 0, m.cols(), static_cast<std::size_t>(-1), tol.rel);
    if (!outcome.complete) throw InternalError("elementary vectors do not span the column space");
    std::vector<SubspaceVector> chosen;
    for (std::size_t k : outcome.picked) chosen.push_back(pool[k].vector);
    return assemble(std::move(chosen), blocks, tol);
}

BasisSearchResult block_respecting_basis(const Matrix& m, const BlockSpec& blocks,
                                         const Tolerance& tol, const EnumerationCap& cap) {
    std::vector<SubspaceVector> chosen;
    for (std::size_t b = 0; b < blocks.count(); ++b) {
        const auto cols = blocks.columns(b);
        const Matrix sub = m.select_columns(cols);
        const auto local = sparsest_basis(sub, BlockSpec::singletons(cols.size()),
                                          BasisMode::unconstrained, tol, cap);
        for (const auto& v : local.vectors) {
            std::vector<double> coeff(m.cols(), 0.0);
            for (std::size_t k = 0; k < cols.size(); ++k) coeff[cols[k]] = v.coeff[k];
            chosen.push_back({v.value, std::move(coeff), v.support});
        }
    }
    return assemble(std::move(chosen), blocks, tol);
}

// Cheapest basis containing at least one mixing vector. For every flat whose
// coefficient subspace is not confined to one block, a generic member of that
// subspace is forced into the basis and the rest is completed greedily in the
// contracted matroid. A generic member has the flat's full support class and
// admits every completion any special member admits, so the minimum over
// flats is the minimum over all mixing vectors.
BasisSearchResult force_mixing_basis(const Matrix& m, const BlockSpec& blocks,
                                     const Tolerance& tol) {
    const double threshold = tol.threshold(m.max_abs());
    const auto pool = candidates_for(elementary_vectors(m, tol), blocks, tol);
    std::size_t min_elementary = pool.empty() ? 0 : pool.front().vector.support_size();

    auto flats = enumerate_flats(m, threshold, false);
    std::vector<std::pair<SupportMask, SupportClass>> classes;
    for (auto& f : flats) {
        std::set<std::size_t> touched;
        for (const auto& x : f.null_basis) {
            const double thr = tol.threshold(linalg::max_abs(x));
            for (std::size_t a = 0; a < x.size(); ++a)
                if (std::abs(x[a]) > thr) touched.insert(blocks.block_of(a));
        }
        if (touched.size() < 2) continue;
        classes.emplace_back(mask_from_zero_rows(f.zero_rows, m.rows()), std::move(f));
    }
    std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    if (classes.empty()) throw InfeasibleError("no mixing vector exists in the column space");

    std::mt19937_64 rng(kGenericSeed);
    auto weight = [&rng] {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return (rng() & 1U ? 1.0 : -1.0) * (1.0 + u);
    };

    std::size_t best_cost = static_cast<std::size_t>(-1);
    std::vector<SubspaceVector> best;
    for (const auto& [mask, flat] : classes) {
        if (mask.size() + (m.cols() - 1) * min_elementary >= best_cost) break;

        std::vector<double> coeff;
        bool generic = false;
        for (int attempt = 0; attempt < 16 && !generic; ++attempt) {
            coeff.assign(m.cols(), 0.0);
            for (const auto& x : flat.null_basis) {
                const double w = flat.null_basis.size() == 1 ? 1.0 : weight();
                for (std::size_t a = 0; a < coeff.size(); ++a) coeff[a] += w * x[a];
            }
            const auto value = m * coeff;
            generic = support_above(value, threshold * static_cast<double>(m.cols())) == mask &&
                      is_mixing(coeff, blocks, tol);
        }
        if (!generic) throw InternalError("no generic representative for support class");

        auto forced = make_vector(m, coeff, flat.zero_rows);
        const auto outcome = greedy_complete(pool, {forced.coeff}, forced.support_size(),
                                             m.cols(), best_cost, tol.rel);
        if (!outcome.complete) continue;
        best_cost = outcome.cost;
        best.clear();
        best.push_back(std::move(forced));
        for (std::size_t k : outcome.picked) best.push_back(pool[k].vector);
    }
    if (best.empty()) throw InternalError("forced-mixing search found no basis");
    return assemble(std::move(best), blocks, tol);
}

}  // namespace

Matrix BasisSearchResult::coefficient_matrix() const {
    if (vectors.empty()) throw InvalidInput("empty basis");
    const std::size_t n = vectors.front().coeff.size();
    Matrix g(n, vectors.size());
    for (std::size_t k = 0; k < vectors.size(); ++k)
        for (std::size_t a = 0; a < n; ++a) g(a, k) = vectors[k].coeff[a];
    return g;
}

bool is_mixing(const std::vector<double>& coeff, const BlockSpec& blocks, const Tolerance& tol) {
    blocks.require_columns(coeff.size());
    const double thr = tol.threshold(linalg::max_abs(coeff));
    std::size_t first_block = blocks.count();
    for (std::size_t a = 0; a < coeff.size(); ++a) {
        if (std::abs(coeff[a]) <= thr) continue;
        const std::size_t b = blocks.block_of(a);
        if (first_block == blocks.count()) first_block = b;
        else if (b != first_block) return true;
    }
    return false;
}

bool achievable(const Matrix& m, const SupportMask& mask, const Tolerance& tol) {
    if (mask.universe() != m.rows()) throw InvalidInput("mask universe differs from row count");
    if (rank(m, tol) < m.cols()) throw RankError("matrix must have full column rank");
    std::vector<std::size_t> outside;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (!mask.contains(r + 1)) outside.push_back(r);
    return linalg::rank_of_rows(m, outside, tol.threshold(m.max_abs())) < m.cols();
}

std::vector<SubspaceVector> minimal_supports(const Matrix& m, const Tolerance& tol,
                                             const EnumerationCap& cap) {
    check_enumerable(m, tol, cap);
    return elementary_vectors(m, tol);
}

BasisSearchResult sparsest_basis(const Matrix& m, const BlockSpec& blocks, BasisMode mode,
                                 const Tolerance& tol, const EnumerationCap& cap) {
    blocks.require_columns(m.cols());
    check_enumerable(m, tol, cap);
    switch (mode) {
        case BasisMode::unconstrained: return unconstrained_basis(m, blocks, tol);
        case BasisMode::block_respecting: return block_respecting_basis(m, blocks, tol, cap);
        case BasisMode::force_mixing: return force_mixing_basis(m, blocks, tol);
    }
    throw InvalidInput("unknown basis mode");
}

SparsityGap sparsity_gap(const Matrix& m, const BlockSpec& blocks, const Tolerance& tol,
                         const EnumerationCap& cap) {
    if (blocks.count() < 2) throw InvalidInput("sparsity gap needs at least two blocks");
    SparsityGap gap;
    gap.respecting = sparsest_basis(m, blocks, BasisMode::block_respecting, tol, cap);
    gap.mixing = sparsest_basis(m, blocks, BasisMode::force_mixing, tol, cap);
    gap.rho_plus = gap.respecting.cost;
    gap.rho_minus = gap.mixing.cost;
    gap.independent = gap.rho_plus < gap.rho_minus;
    return gap;
}

std::vector<std::vector<bool>> pairwise_sparsity_gap(const Matrix& m, const BlockSpec& blocks,
                                                     const Tolerance& tol,
                                                     const EnumerationCap& cap) {
    blocks.require_columns(m.cols());
    const std::size_t k = blocks.count();
    std::vector<std::vector<bool>> table(k, std::vector<bool>(k, true));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            auto cols = blocks.columns(i);
            const auto more = blocks.columns(j);
            cols.insert(cols.end(), more.begin(), more.end());
            const auto gap = sparsity_gap(m.select_columns(cols),
                                          BlockSpec({blocks.dim(i), blocks.dim(j)}), tol, cap);
            table[i][j] = table[j][i] = gap.independent;
        }
    return table;
}

}  // namespace mechindep
