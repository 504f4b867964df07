#include "mechindep/matrix.hpp"

#include <cmath>
#include <string>

#include "mechindep/errors.hpp"
#include "mechindep/linalg.hpp"

namespace mechindep {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    validate();
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    validate();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw ShapeError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    validate();
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InvalidInput("matrix needs at least one row");
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw ShapeError("ragged matrix rows");
        data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

void Matrix::validate() const {
    if (rows_ == 0 || cols_ == 0) throw InvalidInput("matrix dimensions must be positive");
    if (data_.size() != rows_ * cols_)
        throw ShapeError("expected " + std::to_string(rows_ * cols_) + " entries, got " +
                         std::to_string(data_.size()));
    for (double e : data_)
        if (!std::isfinite(e)) throw InvalidInput("matrix entries must be finite");
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

double Matrix::max_abs() const noexcept { return linalg::max_abs(data_); }

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
    Matrix out(rows_, columns.size());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (columns[k] >= cols_) throw ShapeError("column index out of range");
            out(r, k) = (*this)(r, columns[k]);
        }
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), cols_);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] >= rows_) throw ShapeError("row index out of range");
        for (std::size_t c = 0; c < cols_; ++c) out(k, c) = (*this)(rows[k], c);
    }
    return out;
}

Matrix Matrix::column_range(std::size_t first, std::size_t count) const {
    std::vector<std::size_t> cols(count);
    for (std::size_t k = 0; k < count; ++k) cols[k] = first + k;
    return select_columns(cols);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("inner dimensions differ in matrix product");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw ShapeError("vector length differs from column count");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * x[k];
    return out;
}

SupportMask::SupportMask(std::size_t universe) : universe_(universe) {
    if (universe == 0) throw InvalidInput("support universe must be positive");
}

SupportMask::SupportMask(std::size_t universe, std::vector<std::size_t> members)
    : universe_(universe), members_(std::move(members)) {
    if (universe == 0) throw InvalidInput("support universe must be positive");
    std::sort(members_.begin(), members_.end());
    for (std::size_t k = 0; k < members_.size(); ++k) {
        if (members_[k] < 1 || members_[k] > universe_)
            throw InvalidInput("support member " + std::to_string(members_[k]) +
                               " outside 1.." + std::to_string(universe_));
        if (k > 0 && members_[k] == members_[k - 1])
            throw InvalidInput("duplicate support member " + std::to_string(members_[k]));
    }
}

SupportMask SupportMask::full(std::size_t universe) {
    std::vector<std::size_t> all(universe);
    for (std::size_t k = 0; k < universe; ++k) all[k] = k + 1;
    return SupportMask(universe, std::move(all));
}

bool SupportMask::contains(std::size_t index) const {
    return std::binary_search(members_.begin(), members_.end(), index);
}

bool SupportMask::is_subset_of(const SupportMask& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
}

bool SupportMask::intersects(const SupportMask& other) const {
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a == *b) return true;
        if (*a < *b) ++a; else ++b;
    }
    return false;
}

SupportMask SupportMask::intersection(const SupportMask& other) const {
    std::vector<std::size_t> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                          other.members_.end(), std::back_inserter(out));
    return SupportMask(universe_, std::move(out));
}

SupportMask SupportMask::united(const SupportMask& other) const {
    std::vector<std::size_t> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(out));
    return SupportMask(std::max(universe_, other.universe_), std::move(out));
}

SupportMask SupportMask::complement() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k <= universe_; ++k)
        if (!contains(k)) out.push_back(k);
    return SupportMask(universe_, std::move(out));
}

bool SupportMask::operator<(const SupportMask& other) const {
    return std::lexicographical_compare(members_.begin(), members_.end(),
                                        other.members_.begin(), other.members_.end());
}

SupportMask support_above(std::span<const double> v, double threshold) {
    if (v.empty()) throw InvalidInput("support of an empty vector");
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) throw InvalidInput("non-finite entry in support()");
        if (std::abs(v[k]) > threshold) members.push_back(k + 1);
    }
    return SupportMask(v.size(), std::move(members));
}

SupportMask support(std::span<const double> v, const Tolerance& tol) {
    for (double e : v)
        if (!std::isfinite(e)) throw InvalidInput("non-finite entry in support()");
    return support_above(v, tol.threshold(linalg::max_abs(v)));
}

std::vector<SupportMask> column_supports(const Matrix& m, const Tolerance& tol) {
    const double thr = tol.threshold(m.max_abs());
    std::vector<SupportMask> out;
    out.reserve(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(support_above(m.column(c), thr));
    return out;
}

std::size_t rank(const Matrix& m, const Tolerance& tol) {
    return linalg::rank_with_threshold(std::vector<double>(m.data().begin(), m.data().end()),
                                       m.rows(), m.cols(), tol.threshold(m.max_abs()));
}

Matrix face_split(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw ShapeError("face_split needs equal row counts (" + std::to_string(a.rows()) +
                         " vs " + std::to_string(b.rows()) + ")");
    Matrix out(a.rows(), a.cols() * b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t u = 0; u < a.cols(); ++u)
            for (std::size_t v = 0; v < b.cols(); ++v) out(r, u * b.cols() + v) = a(r, u) * b(r, v);
    return out;
}

std::vector<double> hadamard(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("hadamard needs equal lengths");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

std::size_t l0_norm(const Matrix& m, const Tolerance& tol) {
    const double thr = tol.threshold(m.max_abs());
    return static_cast<std::size_t>(std::count_if(m.data().begin(), m.data().end(),
                                                  [thr](double e) { return std::abs(e) > thr; }));
}

bool pitchfork(const SupportMask& a, const SupportMask& b) {
    if (a.universe() != b.universe()) throw InvalidInput("pitchfork needs equal universes");
    return !a.is_subset_of(b) && !b.is_subset_of(a);
}

}  // namespace mechindep
