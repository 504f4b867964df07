#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mechindep/blocks.hpp"
#include "mechindep/certificate.hpp"
#include "mechindep/matrix.hpp"
#include "mechindep/tensor.hpp"

// Ground-truth instances: planted Jacobian support patterns, random mixings
// and finite-difference derivatives of caller-supplied maps.
namespace mechindep {

/// K slots of slot_dim latent coordinates. Slot i owns slot_out output rows;
/// adjacent slots i, i+1 additionally share a group of pairwise rows whose
/// size grows with `overlap`.
struct OverlapTemplate {
    std::size_t slots = 2;
    std::size_t slot_dim = 3;
    std::size_t slot_out = 20;
    double overlap = 0.0;
    std::uint64_t seed = 0;

    /// Rows in each pairwise group: 0 at overlap 0, otherwise
    /// max(1, round(overlap / (1 - overlap) * slot_out)).
    std::size_t pairwise_rows() const;

    Json to_json() const;
    static OverlapTemplate from_json(const Json& j);
};

struct RowGroup {
    std::vector<std::size_t> slots;  // 1-based
    std::size_t first_row = 0;       // 1-based
    std::size_t rows = 0;
};

struct ExpectedVerdicts {
    bool type_d = false;
    bool type_m = true;
    std::size_t column_components = 0;                      // of G^D
    std::vector<std::pair<std::size_t, std::size_t>> block_edges;  // 1-based
};

struct GeneratedInstance {
    OverlapTemplate source;
    Matrix jacobian{1, 1};
    BlockSpec blocks{{1}};
    std::vector<RowGroup> row_groups;
    ExpectedVerdicts expected;

    /// BlockSpec, row groups, allocation and expected verdicts.
    Json sidecar() const;
};

/// Rows are ordered g(1), g(1,2), g(2), g(2,3), ..., g(K). Entries have
/// magnitude uniform in [0.5, 2] and a random sign.
GeneratedInstance gen_overlap_jacobian(const OverlapTemplate& t);

using EvalFunction = std::function<std::vector<double>(std::span<const double>)>;

/// Smooth map whose Jacobian at the origin is `weights`: output r is
/// u_r + u_r^2 / 2 with u = weights * s.
EvalFunction planted_generator(const Matrix& weights);

/// Analytic Hessian of planted_generator at `point`.
DerivativeTensor planted_generator_hessian(const Matrix& weights, std::span<const double> point);

/// Random smooth map that is additive across blocks. With a nonzero
/// `interaction`, output 1 gains interaction * s_a * s_b where a and b are
/// the first coordinates of blocks 1 and 2.
EvalFunction random_additive_function(const BlockSpec& blocks, std::size_t outputs,
                                      std::uint64_t seed, double interaction = 0.0);

enum class MixingKind { block_diagonal, full, block_permuted };

struct MixingDraw {
    Matrix matrix{1, 1};
    /// block_map[i] = 1-based target block reached by source block i.
    std::vector<std::size_t> block_map;
};

/// Invertible mixing with 1-norm condition number <= 1e6. Block-permuted
/// draws only permute blocks of equal dimension.
MixingDraw random_mixing(const BlockSpec& blocks, MixingKind kind, std::uint64_t seed);

/// Central differences, one coordinate at a time.
Matrix fd_jacobian(const EvalFunction& f, std::span<const double> point, double step = 1e-5);

/// Second-order central differences, symmetric in the derivative indices.
DerivativeTensor fd_hessian(const EvalFunction& f, std::span<const double> point,
                            double step = 1e-4);

}  // namespace mechindep
