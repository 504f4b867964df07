#pragma once

#include <cstddef>
#include <vector>

#include "mechindep/matrix.hpp"

namespace mechindep {

/// Order-n derivative of a map R^{d_s} -> R^{d_x} at a point, n in {1, 2, 3}.
/// Layout is row-major over (output, index_1, ..., index_n). Order 1 is the
/// Jacobian; order 2 the Hessian D^2 g; order 3 the third derivative tensor.
class DerivativeTensor {
public:
    DerivativeTensor(std::size_t order, std::size_t outputs, std::size_t inputs,
                     std::vector<double> entries);
    DerivativeTensor(std::size_t order, std::size_t outputs, std::size_t inputs);

    static DerivativeTensor from_jacobian(const Matrix& jacobian);

    std::size_t order() const noexcept { return order_; }
    std::size_t outputs() const noexcept { return outputs_; }
    std::size_t inputs() const noexcept { return inputs_; }
    std::span<const double> entries() const noexcept { return entries_; }
    double max_abs() const noexcept;

    /// `index` holds `order()` 0-based derivative indices.
    double at(std::size_t output, std::span<const std::size_t> index) const;
    double& at(std::size_t output, std::span<const std::size_t> index);

    /// The d_x vector obtained by fixing all derivative indices.
    std::vector<double> fiber(std::span<const std::size_t> index) const;

    /// Largest deviation from symmetry under swapping derivative indices.
    double asymmetry() const;

    /// Every derivative multi-index, in layout order.
    std::vector<std::vector<std::size_t>> multi_indices() const;

    Matrix to_jacobian() const;

private:
    std::size_t offset(std::size_t output, std::span<const std::size_t> index) const;

    std::size_t order_;
    std::size_t outputs_;
    std::size_t inputs_;
    std::vector<double> entries_;
};

/// Alias used where only second derivatives are meaningful.
using HessianTensor = DerivativeTensor;

}  // namespace mechindep
