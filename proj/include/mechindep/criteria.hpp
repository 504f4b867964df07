#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mechindep/blocks.hpp"
#include "mechindep/certificate.hpp"
#include "mechindep/matrix.hpp"
#include "mechindep/sparse_subspace.hpp"
#include "mechindep/tensor.hpp"

// Independence and irreducibility checkers. Block indices passed in are
// 0-based; witnesses report 1-based rows, columns and blocks.
namespace mechindep {

/// Cross-block columns have disjoint supports.
Certificate check_type_d(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol = {});

/// holds = the block admits no rank-additive row 2-split.
Certificate check_type_d_irreducible(const Matrix& j, const BlockSpec& blocks, std::size_t block,
                                     const Tolerance& tol = {}, std::size_t cap = 16);

/// Cross-block column supports are mutually non-included. Throws
/// DegenerateColumn for a zero column.
Certificate check_type_m(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol = {});

/// Same verdict as check_type_m, computed from row supports: for every column
/// k, the columns active on all rows of supp(k) must stay inside k's block.
Certificate check_type_m_rows(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol = {});

/// holds = no 2-partition of the block's columns is pairwise non-included.
Certificate check_type_m_irreducible(const Matrix& j, const BlockSpec& blocks, std::size_t block,
                                     const Tolerance& tol = {});

/// rho+ < rho-. A single block holds vacuously.
Certificate check_type_s(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol = {},
                         const EnumerationCap& cap = {});

/// Sparsity gap for every pair of blocks.
Certificate check_type_s_pairwise(const Matrix& j, const BlockSpec& blocks,
                                  const Tolerance& tol = {}, const EnumerationCap& cap = {});

/// holds = no split of an optimal basis of the block shows a strict gap.
/// Only splits of optimal bases are tried, so "reducible" is certain and
/// "irreducible" is relative to that candidate set.
Certificate check_type_s_irreducible(const Matrix& j, const BlockSpec& blocks, std::size_t block,
                                     const Tolerance& tol = {}, const EnumerationCap& cap = {});

/// Order-n derivative tensor (n = 2 or 3) has no nonzero entry whose
/// derivative indices touch two different blocks.
Certificate check_type_h(const DerivativeTensor& t, const BlockSpec& blocks,
                         const Tolerance& tol = {});

/// holds = the within-block slice is nonzero and no coordinate 2-split of the
/// block zeroes its cross terms.
Certificate check_type_h_irreducible(const DerivativeTensor& t, const BlockSpec& blocks,
                                     std::size_t block, const Tolerance& tol = {});

/// `tensors[k]` is the derivative of order k + 1; the last one fixes n >= 2.
Certificate check_separability(const std::vector<DerivativeTensor>& tensors,
                               const BlockSpec& blocks, const Tolerance& tol = {});

/// Each column support of jghat equals the union of the jg supports selected
/// by the matching column of b. Throws InvalidInput unless jghat = jg * b.
Certificate check_support_union(const Matrix& jg, const Matrix& jghat, const Matrix& b,
                                const Tolerance& tol = {});

Certificate check_l0_nonincrease(const Matrix& jg, const Matrix& jghat, const Tolerance& tol = {});

struct AssignmentOutcome {
    /// sigma[i] = 1-based target block of 0-based source block i.
    std::optional<std::vector<std::size_t>> sigma;
    Certificate certificate;
};

/// Reads a block map off an invertible matrix whose block-rows each touch
/// exactly one target block-column.
AssignmentOutcome extract_assignment(const Matrix& b, const BlockSpec& source,
                                     const BlockSpec& target, const Tolerance& tol = {});

/// Sum over rows and block pairs i < j of |J_{r,i}|_2 * |J_{r,j}|_2.
double compositional_contrast(const Matrix& j, const BlockSpec& blocks);

Certificate check_contrast(const Matrix& j, const BlockSpec& blocks);

/// Cross-block columns are orthogonal.
Certificate check_type_o(const Matrix& j, const BlockSpec& blocks, const Tolerance& tol = {});

/// Evaluates the applicable criteria and checks D => M, D => S, D => H2 and
/// S => M (in the sparsest block-respecting basis). holds = no violated arrow.
Certificate hierarchy_audit(const Matrix& j, const BlockSpec& blocks,
                            const std::optional<DerivativeTensor>& hessian = std::nullopt,
                            const Tolerance& tol = {}, const EnumerationCap& cap = {});

}  // namespace mechindep
