#include "mechindep/factor_graphs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "mechindep/errors.hpp"
#include "mechindep/linalg.hpp"

namespace mechindep {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    for (std::size_t k = 0; k < n; ++k) parent_[k] = k;
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
}

bool FactorGraph::has_edge(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return edges.count({i, j}) > 0;
}

FactorGraph build_graph(const Matrix& jacobian, GraphKind kind, const Tolerance& tol) {
    if (kind == GraphKind::H2) throw InvalidInput("an H2 graph is built from a Hessian tensor");
    const auto supports = column_supports(jacobian, tol);
    FactorGraph g{kind, jacobian.cols(), {}};
    for (std::size_t i = 0; i < supports.size(); ++i)
        for (std::size_t j = i + 1; j < supports.size(); ++j) {
            const bool edge = kind == GraphKind::D ? supports[i].intersects(supports[j])
                                                   : !pitchfork(supports[i], supports[j]);
            if (edge) g.edges.insert({i + 1, j + 1});
        }
    return g;
}

FactorGraph build_graph(const DerivativeTensor& hessian, const Tolerance& tol) {
    if (hessian.order() != 2) throw ShapeError("an H2 graph needs an order-2 tensor");
    const double thr = tol.threshold(hessian.max_abs());
    FactorGraph g{GraphKind::H2, hessian.inputs(), {}};
    for (std::size_t i = 0; i < hessian.inputs(); ++i)
        for (std::size_t j = i + 1; j < hessian.inputs(); ++j) {
            const std::array<std::size_t, 2> idx{i, j};
            if (linalg::max_abs(hessian.fiber(idx)) > thr) g.edges.insert({i + 1, j + 1});
        }
    return g;
}

std::vector<std::vector<std::size_t>> components(const FactorGraph& graph) {
    UnionFind uf(graph.vertex_count);
    for (const auto& [i, j] : graph.edges) uf.unite(i - 1, j - 1);
    std::map<std::size_t, std::vector<std::size_t>> by_root;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(graph.vertex_count, static_cast<std::size_t>(-1));
    for (std::size_t v = 0; v < graph.vertex_count; ++v) {
        const std::size_t root = uf.find(v);
        if (slot[root] == static_cast<std::size_t>(-1)) {
            slot[root] = out.size();
            out.emplace_back();
        }
        out[slot[root]].push_back(v + 1);
    }
    return out;
}

namespace {

std::vector<std::size_t> nonzero_rows(const Matrix& m, double thr) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (linalg::max_abs(m.row(r)) > thr) out.push_back(r);
    return out;
}

SupportMask mask_of(const std::vector<std::size_t>& rows0, std::size_t universe) {
    std::vector<std::size_t> members;
    for (std::size_t r : rows0) members.push_back(r + 1);
    return SupportMask(universe, std::move(members));
}

// First rank-additive 2-split of `rows` (all nonzero), or nothing. The first
// row always stays in the first part.
struct Split {
    std::vector<std::size_t> first;
    std::vector<std::size_t> second;
};

std::vector<Split> rank_additive_splits(const Matrix& m, const std::vector<std::size_t>& rows,
                                        double thr, bool first_only, std::size_t cap) {
    std::vector<Split> out;
    if (rows.size() < 2) return out;
    if (rows.size() > cap)
        throw SizeError("rank-additive partition search refuses " + std::to_string(rows.size()) +
                        " occupied rows (cap " + std::to_string(cap) + ")");
    const std::size_t total = linalg::rank_of_rows(m, rows, thr);
    const std::size_t free_rows = rows.size() - 1;
    const std::uint64_t limit = (std::uint64_t{1} << free_rows) - 1;  // excludes "all in first"
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Split s;
        s.first.push_back(rows[0]);
        for (std::size_t k = 0; k < free_rows; ++k)
            (mask >> k & 1U ? s.first : s.second).push_back(rows[k + 1]);
        if (linalg::rank_of_rows(m, s.first, thr) + linalg::rank_of_rows(m, s.second, thr) ==
            total) {
            out.push_back(std::move(s));
            if (first_only) break;
        }
    }
    return out;
}

void split_recursively(const Matrix& m, const std::vector<std::size_t>& rows, double thr,
                       std::size_t cap, std::vector<std::vector<std::size_t>>& parts) {
    auto splits = rank_additive_splits(m, rows, thr, true, cap);
    if (splits.empty()) {
        parts.push_back(rows);
        return;
    }
    split_recursively(m, splits.front().first, thr, cap, parts);
    split_recursively(m, splits.front().second, thr, cap, parts);
}

RowPartition to_partition(std::vector<std::vector<std::size_t>> parts,
                          const std::vector<std::size_t>& zero_rows, std::size_t universe) {
    for (auto& p : parts) std::sort(p.begin(), p.end());
    std::sort(parts.begin(), parts.end());
    if (parts.empty()) parts.emplace_back();
    parts.front().insert(parts.front().end(), zero_rows.begin(), zero_rows.end());
    RowPartition out;
    for (const auto& p : parts) out.groups.push_back(mask_of(p, universe));
    return out;
}

std::vector<std::size_t> complement_rows(const std::vector<std::size_t>& nonzero, std::size_t rows) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < rows; ++r)
        if (!std::binary_search(nonzero.begin(), nonzero.end(), r)) out.push_back(r);
    return out;
}

std::vector<std::size_t> to_zero_based(const SupportMask& mask) {
    std::vector<std::size_t> out;
    for (std::size_t r : mask.members()) out.push_back(r - 1);
    return out;
}

}  // namespace

std::vector<RowPartition> rank_additive_partitions(const Matrix& m, std::size_t parts,
                                                   const Tolerance& tol, std::size_t cap) {
    if (parts == 0) throw InvalidInput("partition count must be positive");
    if (rank(m, tol) < m.cols()) throw RankError("matrix must have full column rank");
    const double thr = tol.threshold(m.max_abs());
    const auto occupied = nonzero_rows(m, thr);
    const auto zero = complement_rows(occupied, m.rows());

    if (parts == 1) return {to_partition({occupied}, zero, m.rows())};
    if (parts == 2) {
        std::vector<RowPartition> out;
        for (auto& s : rank_additive_splits(m, occupied, thr, false, cap))
            out.push_back(to_partition({s.first, s.second}, zero, m.rows()));
        return out;
    }
    std::vector<std::vector<std::size_t>> found;
    split_recursively(m, occupied, thr, cap, found);
    return {to_partition(std::move(found), zero, m.rows())};
}

RowPartition row_matroid_components(const Matrix& m, const Tolerance& tol) {
    const double thr = tol.threshold(m.max_abs());
    const auto occupied = nonzero_rows(m, thr);
    const auto zero = complement_rows(occupied, m.rows());

    std::vector<std::size_t> basis_rows;
    std::vector<std::vector<double>> basis;
    std::vector<std::size_t> others;
    for (std::size_t r : occupied) {
        basis_rows.push_back(r);
        if (linalg::rank_of_rows(m, basis_rows, thr) == basis_rows.size()) {
            basis.emplace_back(m.row(r).begin(), m.row(r).end());
        } else {
            basis_rows.pop_back();
            others.push_back(r);
        }
    }

    UnionFind uf(m.rows());
    for (std::size_t e : others) {
        const auto coeff = linalg::express_in_span(basis, m.row(e), thr);
        if (!coeff) throw InternalError("dependent row outside the span of the row basis");
        const double cthr = tol.threshold(linalg::max_abs(*coeff));
        for (std::size_t k = 0; k < coeff->size(); ++k)
            if (std::abs((*coeff)[k]) > cthr) uf.unite(e, basis_rows[k]);
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t r : occupied) groups[uf.find(r)].push_back(r);
    std::vector<std::vector<std::size_t>> parts;
    for (auto& [root, rows] : groups) parts.push_back(std::move(rows));
    return to_partition(std::move(parts), zero, m.rows());
}

BlockCountAudit block_count_audit(const Matrix& m, const Tolerance& tol, std::uint64_t seed,
                                  std::size_t draws) {
    if (rank(m, tol) < m.cols()) throw RankError("matrix must have full column rank");
    const double thr = tol.threshold(m.max_abs());
    BlockCountAudit audit;
    audit.seed = seed;
    audit.draws = draws;

    audit.partition = rank_additive_partitions(m, 3, tol).front();
    audit.rank_partition_count = audit.partition.groups.size();
    audit.matroid_count = row_matroid_components(m, tol).groups.size();

    // Witness basis: group k contributes the null space of all rows outside it,
    // so M times those columns is supported on the group's rows only.
    std::vector<std::vector<double>> columns;
    std::vector<std::size_t> column_group;
    for (std::size_t k = 0; k < audit.partition.groups.size(); ++k) {
        const auto& group = audit.partition.groups[k];
        std::vector<std::size_t> outside;
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (!group.contains(r + 1)) outside.push_back(r);
        for (auto& x : linalg::null_space_of_rows(m, outside, thr)) {
            columns.push_back(std::move(x));
            column_group.push_back(k);
        }
        for (std::size_t r : group.members()) audit.row_order.push_back(r);
    }
    if (columns.size() != m.cols())
        throw InternalError("rank-additive partition does not yield a full witness basis");
    Matrix basis(m.cols(), m.cols());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t a = 0; a < m.cols(); ++a) basis(a, c) = columns[c][a];
    if (rank(basis, tol) < m.cols()) throw InternalError("witness basis is singular");
    audit.basis = basis;

    const Matrix mixed = m * basis;
    const auto supports = column_supports(mixed, tol);
    for (std::size_t c = 0; c < supports.size(); ++c)
        if (!supports[c].is_subset_of(audit.partition.groups[column_group[c]]))
            throw InternalError("witness basis is not block diagonal");
    audit.block_diagonal_count = components(build_graph(mixed, GraphKind::D, tol)).size();

    for (std::size_t k = 0; k < audit.partition.groups.size(); ++k) {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < column_group.size(); ++c)
            if (column_group[c] == k) cols.push_back(c);
        const Matrix mechanism =
            mixed.select_rows(to_zero_based(audit.partition.groups[k])).select_columns(cols);
        audit.mechanism_count += row_matroid_components(mechanism, tol).groups.size();
    }

    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
    for (std::size_t d = 0; d < draws; ++d) {
        Matrix mix(m.cols(), m.cols());
        do {
            for (std::size_t a = 0; a < m.cols(); ++a)
                for (std::size_t b = 0; b < m.cols(); ++b) mix(a, b) = uniform();
        } while (rank(mix, tol) < m.cols());
        audit.sampled_max_components = std::max(
            audit.sampled_max_components, components(build_graph(m * mix, GraphKind::D, tol)).size());
    }

    const std::size_t k = audit.rank_partition_count;
    if (audit.matroid_count != k || audit.block_diagonal_count != k || audit.mechanism_count != k ||
        audit.sampled_max_components > k) {
        std::ostringstream msg;
        msg << "block-count characterizations disagree: rank-partition " << k << ", matroid "
            << audit.matroid_count << ", block-diagonal " << audit.block_diagonal_count
            << ", mechanisms " << audit.mechanism_count << ", sampled max "
            << audit.sampled_max_components;
        throw InternalError(msg.str());
    }
    return audit;
}

Certificate prop_a10_audit(const Matrix& m, std::size_t expected, const Tolerance& tol,
                           std::uint64_t seed, std::size_t draws) {
    const auto audit = block_count_audit(m, tol, seed, draws);
    Certificate cert;
    cert.criterion = Criterion::prop_a10;
    cert.holds = audit.rank_partition_count == expected;
    cert.inputs_digest = digest(m);

    Json groups = Json::array();
    for (const auto& g : audit.partition.groups) groups.push_back(to_json(g));
    Json& w = cert.witness;
    w["expected"] = expected;
    w["maximalBlockCount"] = audit.rank_partition_count;
    w["counts"] = {{"rankAdditivePartition", audit.rank_partition_count},
                   {"blockDiagonal", audit.block_diagonal_count},
                   {"irreducibleMechanisms", audit.mechanism_count},
                   {"rowMatroid", audit.matroid_count},
                   {"sampledMaxComponents", audit.sampled_max_components}};
    w["rowPartition"] = groups;
    w["rowOrder"] = audit.row_order;
    w["basis"] = to_json(audit.basis);
    w["seed"] = audit.seed;
    w["draws"] = audit.draws;
    cert.notes.push_back("maximal count under random mixings is sampled (" +
                         std::to_string(draws) + " draws) and can only under-count");
    cert.notes.push_back("no finer partition exists: every group has no rank-additive 2-split");
    return cert;
}

std::string to_dot(const FactorGraph& graph) {
    static constexpr std::array<const char*, 8> palette{
        "lightblue", "lightsalmon", "palegreen", "khaki",
        "plum",      "lightgrey",   "lightpink", "aquamarine"};
    const char* name = graph.kind == GraphKind::D ? "GD" : graph.kind == GraphKind::M ? "GM" : "GH2";
    std::ostringstream out;
    out << "graph " << name << " {\n";
    out << "  node [shape=circle, style=filled];\n";
    const auto comps = components(graph);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        out << "  subgraph cluster_" << c + 1 << " {\n";
        out << "    label=\"component " << c + 1 << "\";\n";
        for (std::size_t v : comps[c])
            out << "    " << v << " [label=\"" << v << "\", fillcolor=" << palette[c % palette.size()]
                << "];\n";
        out << "  }\n";
    }
    for (const auto& [i, j] : graph.edges) out << "  " << i << " -- " << j << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace mechindep
