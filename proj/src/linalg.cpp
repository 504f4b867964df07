#include "mechindep/linalg.hpp"

#include <cmath>
#include <utility>

#include "mechindep/errors.hpp"

namespace mechindep::linalg {

namespace {

// Reduced row echelon form in place with partial pivoting. Returns the pivot
// column of each pivot row.
std::vector<std::size_t> rref(std::vector<double>& a, std::size_t rows, std::size_t cols,
                              double threshold) {
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * cols + c]; };
    std::vector<std::size_t> pivots;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t best = pr;
        for (std::size_t r = pr + 1; r < rows; ++r)
            if (std::abs(at(r, c)) > std::abs(at(best, c))) best = r;
        if (std::abs(at(best, c)) <= threshold) {
            for (std::size_t r = pr; r < rows; ++r) at(r, c) = 0.0;
            continue;
        }
        if (best != pr)
            for (std::size_t k = 0; k < cols; ++k) std::swap(at(pr, k), at(best, k));
        const double p = at(pr, c);
        for (std::size_t k = c; k < cols; ++k) at(pr, k) /= p;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, c);
            if (f == 0.0) continue;
            for (std::size_t k = c; k < cols; ++k) at(r, k) -= f * at(pr, k);
            at(r, c) = 0.0;
        }
        pivots.push_back(c);
        ++pr;
    }
    return pivots;
}

}  // namespace

std::size_t rank_with_threshold(std::vector<double> a, std::size_t rows, std::size_t cols,
                                double threshold) {
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * cols + c]; };
    std::vector<std::size_t> col_perm(cols);
    for (std::size_t k = 0; k < cols; ++k) col_perm[k] = k;
    const std::size_t steps = std::min(rows, cols);
    std::size_t rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t pr = k, pc = k;
        double best = -1.0;
        for (std::size_t r = k; r < rows; ++r)
            for (std::size_t c = k; c < cols; ++c)
                if (std::abs(at(r, c)) > best) {
                    best = std::abs(at(r, c));
                    pr = r;
                    pc = c;
                }
        if (best <= threshold) break;
        if (pr != k)
            for (std::size_t c = 0; c < cols; ++c) std::swap(at(k, c), at(pr, c));
        if (pc != k)
            for (std::size_t r = 0; r < rows; ++r) std::swap(at(r, k), at(r, pc));
        const double p = at(k, k);
        for (std::size_t r = k + 1; r < rows; ++r) {
            const double f = at(r, k) / p;
            if (f == 0.0) continue;
            for (std::size_t c = k; c < cols; ++c) at(r, c) -= f * at(k, c);
        }
        ++rank;
    }
    return rank;
}

std::size_t rank_of_rows(const Matrix& m, std::span<const std::size_t> rows, double threshold) {
    std::vector<double> a;
    a.reserve(rows.size() * m.cols());
    for (std::size_t r : rows) a.insert(a.end(), m.row(r).begin(), m.row(r).end());
    return rank_with_threshold(std::move(a), rows.size(), m.cols(), threshold);
}

std::size_t rank_of_vectors(const std::vector<std::vector<double>>& vectors, double threshold) {
    if (vectors.empty()) return 0;
    const std::size_t n = vectors.front().size();
    std::vector<double> a;
    a.reserve(vectors.size() * n);
    for (const auto& v : vectors) {
        if (v.size() != n) throw ShapeError("rank_of_vectors needs equal lengths");
        a.insert(a.end(), v.begin(), v.end());
    }
    return rank_with_threshold(std::move(a), vectors.size(), n, threshold);
}

std::vector<std::vector<double>> null_space_of_rows(const Matrix& m,
                                                    std::span<const std::size_t> rows,
                                                    double threshold) {
    const std::size_t n = m.cols();
    std::vector<double> a;
    a.reserve(rows.size() * n);
    for (std::size_t r : rows) a.insert(a.end(), m.row(r).begin(), m.row(r).end());
    const auto pivots = rref(a, rows.size(), n, threshold);

    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::vector<double>> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<double> x(n, 0.0);
        x[f] = 1.0;
        for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = -a[k * n + f];
        basis.push_back(std::move(x));
    }
    return basis;
}

std::optional<std::vector<double>> express_in_span(const std::vector<std::vector<double>>& basis,
                                                   std::span<const double> target,
                                                   double threshold) {
    const std::size_t n = target.size();
    const std::size_t r = basis.size();
    // Columns are the basis vectors, last column is the target.
    std::vector<double> a(n * (r + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < r; ++k) {
            if (basis[k].size() != n) throw ShapeError("express_in_span needs equal lengths");
            a[i * (r + 1) + k] = basis[k][i];
        }
        a[i * (r + 1) + r] = target[i];
    }
    const auto pivots = rref(a, n, r + 1, threshold);
    if (!pivots.empty() && pivots.back() == r) return std::nullopt;
    if (pivots.size() != r) throw RankError("express_in_span basis is linearly dependent");
    std::vector<double> coeff(r);
    for (std::size_t k = 0; k < r; ++k) coeff[pivots[k]] = a[k * (r + 1) + r];
    return coeff;
}

std::optional<Matrix> inverse(const Matrix& m, double threshold) {
    if (m.rows() != m.cols()) throw ShapeError("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    std::vector<double> a(n * 2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i * 2 * n + j] = m(i, j);
        a[i * 2 * n + n + i] = 1.0;
    }
    const auto pivots = rref(a, n, 2 * n, threshold);
    if (pivots.size() < n || pivots[n - 1] >= n) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = a[i * 2 * n + n + j];
    return inv;
}

double norm1(const Matrix& m) {
    double best = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("dot needs equal lengths");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
    double best = 0.0;
    for (double e : a) best = std::max(best, std::abs(e));
    return best;
}

}  // namespace mechindep::linalg
