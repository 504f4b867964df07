#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mechindep/blocks.hpp"
#include "mechindep/matrix.hpp"

// Exact desk-scale search for sparse bases of a column space.
//
// Everything here works on the column space of a full-column-rank matrix M.
// A vector of that space is identified with its coefficient vector c (value =
// M c). Its support is determined by the set of rows where it vanishes, and the
// rows that can vanish together form the flats of the row matroid of M. The
// search therefore enumerates flats instead of all 2^rows masks: hyperplanes
// give the minimal-support (elementary) vectors, and flats of any rank give
// the support classes needed for the forced-mixing search.
namespace mechindep {

struct SubspaceVector {
    std::vector<double> value;  ///< M * coeff, largest-magnitude entry scaled to +1
    std::vector<double> coeff;
    SupportMask support;

    std::size_t support_size() const noexcept { return support.size(); }
};

enum class BasisMode { unconstrained, block_respecting, force_mixing };

struct BasisSearchResult {
    std::size_t cost = 0;
    std::vector<SubspaceVector> vectors;
    std::vector<bool> mixing;  ///< coefficient support spans two or more blocks

    /// Coefficient vectors as the columns of a change-of-basis matrix G, so
    /// that the basis values are the columns of M * G.
    Matrix coefficient_matrix() const;
};

struct SparsityGap {
    std::size_t rho_plus = 0;
    std::size_t rho_minus = 0;
    bool independent = false;
    BasisSearchResult respecting;
    BasisSearchResult mixing;
};

/// Seed for the random weights that pick generic members of a support class.
inline constexpr std::uint64_t kGenericSeed = 0x6d69786564;

struct EnumerationCap {
    std::size_t max_rows = 20;
    std::size_t max_cols = 8;
};

/// True iff some nonzero vector of col(M) is supported inside `mask`.
bool achievable(const Matrix& m, const SupportMask& mask, const Tolerance& tol = {});

/// All inclusion-minimal achievable supports, one normalized representative
/// each, sorted by (support size, lexicographic mask).
std::vector<SubspaceVector> minimal_supports(const Matrix& m, const Tolerance& tol = {},
                                             const EnumerationCap& cap = {});

BasisSearchResult sparsest_basis(const Matrix& m, const BlockSpec& blocks, BasisMode mode,
                                 const Tolerance& tol = {}, const EnumerationCap& cap = {});

SparsityGap sparsity_gap(const Matrix& m, const BlockSpec& blocks, const Tolerance& tol = {},
                         const EnumerationCap& cap = {});

/// K x K table; entry (i, j), i != j, is the sparsity-gap verdict of the
/// column submatrix of blocks i and j. Diagonal entries are true.
std::vector<std::vector<bool>> pairwise_sparsity_gap(const Matrix& m, const BlockSpec& blocks,
                                                     const Tolerance& tol = {},
                                                     const EnumerationCap& cap = {});

/// Whether a coefficient vector touches two or more blocks.
bool is_mixing(const std::vector<double>& coeff, const BlockSpec& blocks, const Tolerance& tol = {});

}  // namespace mechindep
