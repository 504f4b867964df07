#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mechindep/matrix.hpp"

// Elimination kernels shared by the analysis modules. They work on row subsets
// that may be empty, which Matrix itself does not allow.
namespace mechindep::linalg {

/// Rank of a rows x cols row-major buffer by complete pivoting; pivots with
/// magnitude <= threshold count as zero. Either dimension may be 0.
std::size_t rank_with_threshold(std::vector<double> a, std::size_t rows, std::size_t cols,
                                double threshold);

/// Rank of the submatrix of `m` formed by the 0-based `rows`.
std::size_t rank_of_rows(const Matrix& m, std::span<const std::size_t> rows, double threshold);

/// Rank of a list of equal-length vectors.
std::size_t rank_of_vectors(const std::vector<std::vector<double>>& vectors, double threshold);

/// Basis of {x : m_R x = 0} where R are the 0-based `rows` (R may be empty).
std::vector<std::vector<double>> null_space_of_rows(const Matrix& m,
                                                    std::span<const std::size_t> rows,
                                                    double threshold);

/// Coefficients c with sum_i c_i * basis[i] == target, or nullopt when target is
/// outside the span. `basis` must be linearly independent.
std::optional<std::vector<double>> express_in_span(const std::vector<std::vector<double>>& basis,
                                                   std::span<const double> target,
                                                   double threshold);

/// Gauss-Jordan inverse with partial pivoting; nullopt when singular.
std::optional<Matrix> inverse(const Matrix& m, double threshold);

/// Induced 1-norm (max column abs sum).
double norm1(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs(std::span<const double> a);

}  // namespace mechindep::linalg
