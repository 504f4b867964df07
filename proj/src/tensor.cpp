#include "mechindep/tensor.hpp"

#include <cmath>
#include <string>

#include "mechindep/errors.hpp"
#include "mechindep/linalg.hpp"

namespace mechindep {

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t k = 0; k < exp; ++k) out *= base;
    return out;
}

}  // namespace

DerivativeTensor::DerivativeTensor(std::size_t order, std::size_t outputs, std::size_t inputs,
                                   std::vector<double> entries)
    : order_(order), outputs_(outputs), inputs_(inputs), entries_(std::move(entries)) {
    if (order < 1 || order > 3) throw InvalidInput("derivative order must be 1, 2 or 3");
    if (outputs == 0 || inputs == 0) throw InvalidInput("tensor dimensions must be positive");
    const std::size_t expected = outputs * power(inputs, order);
    if (entries_.size() != expected)
        throw ShapeError("tensor expects " + std::to_string(expected) + " entries, got " +
                         std::to_string(entries_.size()));
    for (double e : entries_)
        if (!std::isfinite(e)) throw InvalidInput("tensor entries must be finite");
}

DerivativeTensor::DerivativeTensor(std::size_t order, std::size_t outputs, std::size_t inputs)
    : DerivativeTensor(order, outputs, inputs,
                       std::vector<double>(outputs * power(inputs, order), 0.0)) {}

DerivativeTensor DerivativeTensor::from_jacobian(const Matrix& jacobian) {
    return DerivativeTensor(1, jacobian.rows(), jacobian.cols(),
                            std::vector<double>(jacobian.data().begin(), jacobian.data().end()));
}

double DerivativeTensor::max_abs() const noexcept { return linalg::max_abs(entries_); }

std::size_t DerivativeTensor::offset(std::size_t output, std::span<const std::size_t> index) const {
    if (index.size() != order_) throw ShapeError("tensor index has wrong arity");
    if (output >= outputs_) throw ShapeError("tensor output index out of range");
    std::size_t off = output;
    for (std::size_t a : index) {
        if (a >= inputs_) throw ShapeError("tensor derivative index out of range");
        off = off * inputs_ + a;
    }
    return off;
}

double DerivativeTensor::at(std::size_t output, std::span<const std::size_t> index) const {
    return entries_[offset(output, index)];
}

double& DerivativeTensor::at(std::size_t output, std::span<const std::size_t> index) {
    return entries_[offset(output, index)];
}

std::vector<double> DerivativeTensor::fiber(std::span<const std::size_t> index) const {
    std::vector<double> out(outputs_);
    for (std::size_t r = 0; r < outputs_; ++r) out[r] = at(r, index);
    return out;
}

double DerivativeTensor::asymmetry() const {
    double worst = 0.0;
    for (const auto& idx : multi_indices()) {
        for (std::size_t p = 0; p + 1 < idx.size(); ++p) {
            auto swapped = idx;
            std::swap(swapped[p], swapped[p + 1]);
            for (std::size_t r = 0; r < outputs_; ++r)
                worst = std::max(worst, std::abs(at(r, idx) - at(r, swapped)));
        }
    }
    return worst;
}

std::vector<std::vector<std::size_t>> DerivativeTensor::multi_indices() const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(order_, 0);
    const std::size_t total = power(inputs_, order_);
    out.reserve(total);
    for (std::size_t n = 0; n < total; ++n) {
        out.push_back(idx);
        for (std::size_t p = order_; p-- > 0;) {
            if (++idx[p] < inputs_) break;
            idx[p] = 0;
        }
    }
    return out;
}

Matrix DerivativeTensor::to_jacobian() const {
    if (order_ != 1) throw ShapeError("only an order-1 tensor is a Jacobian");
    return Matrix(outputs_, inputs_, entries_);
}

}  // namespace mechindep
