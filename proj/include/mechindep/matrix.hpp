#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace mechindep {

/// Zero classification: an entry e of M is zero iff |e| <= max(abs, rel * max|M|).
/// The reference scale is the matrix (or vector) the entry belongs to.
struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;

    double threshold(double max_magnitude) const noexcept {
        return std::max(abs, rel * max_magnitude);
    }
};

/// Dense row-major real matrix. Element access is 0-based; every index that
/// leaves the library through a SupportMask, witness or report is 1-based.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }
    std::vector<double> column(std::size_t c) const;

    double max_abs() const noexcept;

    Matrix transpose() const;
    /// Submatrix made of the given 0-based columns, in the given order.
    Matrix select_columns(std::span<const std::size_t> columns) const;
    /// Submatrix made of the given 0-based rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> rows) const;
    /// Column range [first, first + count).
    Matrix column_range(std::size_t first, std::size_t count) const;

    bool operator==(const Matrix& other) const = default;

private:
    void validate() const;

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, std::span<const double> x);

/// Sorted, duplicate-free subset of {1, ..., universe}.
class SupportMask {
public:
    explicit SupportMask(std::size_t universe);
    SupportMask(std::size_t universe, std::vector<std::size_t> members);

    static SupportMask full(std::size_t universe);

    std::size_t universe() const noexcept { return universe_; }
    const std::vector<std::size_t>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(std::size_t index) const;

    bool is_subset_of(const SupportMask& other) const;
    bool intersects(const SupportMask& other) const;
    SupportMask intersection(const SupportMask& other) const;
    SupportMask united(const SupportMask& other) const;
    SupportMask complement() const;

    bool operator==(const SupportMask& other) const = default;
    /// Lexicographic on the sorted member list.
    bool operator<(const SupportMask& other) const;

private:
    std::size_t universe_;
    std::vector<std::size_t> members_;
};

/// Indices of entries above the threshold of `tol` relative to max|v|.
SupportMask support(std::span<const double> v, const Tolerance& tol = {});
/// Same as support() with an explicit absolute threshold.
SupportMask support_above(std::span<const double> v, double threshold);

/// Per-column supports of M, classified against max|M| (not per column).
std::vector<SupportMask> column_supports(const Matrix& m, const Tolerance& tol = {});

/// Numerical rank by complete-pivoting Gaussian elimination.
std::size_t rank(const Matrix& m, const Tolerance& tol = {});

/// Row-wise Kronecker (face-splitting) product.
Matrix face_split(const Matrix& a, const Matrix& b);

std::vector<double> hadamard(std::span<const double> a, std::span<const double> b);

/// Number of entries classified nonzero.
std::size_t l0_norm(const Matrix& m, const Tolerance& tol = {});

/// Mutual non-inclusion: neither set contains the other.
bool pitchfork(const SupportMask& a, const SupportMask& b);

}  // namespace mechindep
