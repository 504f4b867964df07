#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mechindep/certificate.hpp"
#include "mechindep/matrix.hpp"
#include "mechindep/tensor.hpp"

namespace mechindep {

class UnionFind {
public:
    explicit UnionFind(std::size_t n);

    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);
    bool connected(std::size_t a, std::size_t b) { return find(a) == find(b); }
    std::size_t size() const noexcept { return parent_.size(); }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

enum class GraphKind { D, M, H2 };

/// Undirected graph on the column indices 1..vertex_count. Edges are stored
/// once as (i, j) with i < j.
struct FactorGraph {
    GraphKind kind = GraphKind::D;
    std::size_t vertex_count = 0;
    std::set<std::pair<std::size_t, std::size_t>> edges;

    bool has_edge(std::size_t i, std::size_t j) const;
};

/// D: edge iff supports intersect. M: edge iff supports are comparable.
FactorGraph build_graph(const Matrix& jacobian, GraphKind kind, const Tolerance& tol = {});
/// H2: edge iff the cross-Hessian fiber D^2 g(u_i, u_j) is nonzero.
FactorGraph build_graph(const DerivativeTensor& hessian, const Tolerance& tol = {});

/// Connected components as sorted 1-based vertex lists, ordered by smallest vertex.
std::vector<std::vector<std::size_t>> components(const FactorGraph& graph);

struct RowPartition {
    std::vector<SupportMask> groups;
};

/// parts == 2: every row 2-partition with rank(M) = rank(M_Q1) + rank(M_Q2)
/// and both ranks >= 1. parts > 2: a single entry, the finest rank-additive
/// partition reached by recursive 2-splitting. Zero rows join the first group.
std::vector<RowPartition> rank_additive_partitions(const Matrix& m, std::size_t parts,
                                                   const Tolerance& tol = {},
                                                   std::size_t cap = 16);

/// Connected components of the row matroid of M, from the fundamental circuits
/// of a greedy row basis. Zero rows (loops) join the first group. No size cap.
RowPartition row_matroid_components(const Matrix& m, const Tolerance& tol = {});

struct BlockCountAudit {
    std::size_t rank_partition_count = 0;   // finest rank-additive row partition
    std::size_t block_diagonal_count = 0;   // G^D components of M * witness basis
    std::size_t mechanism_count = 0;        // irreducible mechanisms of M * witness basis
    std::size_t matroid_count = 0;          // row-matroid components
    std::size_t sampled_max_components = 0; // max over random invertible mixings
    std::size_t draws = 0;
    std::uint64_t seed = 0;
    RowPartition partition;
    std::vector<std::size_t> row_order;  // 1-based rows, grouped by partition
    Matrix basis{1, 1};                  // columns grouped by block
};

/// Evaluates the four equivalent characterizations of the maximal block count
/// of a full-column-rank matrix and throws InternalError if they disagree.
BlockCountAudit block_count_audit(const Matrix& m, const Tolerance& tol = {},
                                  std::uint64_t seed = 20240607, std::size_t draws = 200);

/// Certificate holding iff the audited maximal block count equals `expected`.
Certificate prop_a10_audit(const Matrix& m, std::size_t expected, const Tolerance& tol = {},
                           std::uint64_t seed = 20240607, std::size_t draws = 200);

/// Graphviz rendering: one cluster per component, vertices labelled by column.
std::string to_dot(const FactorGraph& graph);

}  // namespace mechindep
