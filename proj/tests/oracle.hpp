#pragma once

// Brute-force reference implementations used to cross-check the library.
// They share only the Matrix type with the code under test.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <random>
#include <vector>

#include "mechindep/matrix.hpp"

namespace oracle {

using mechindep::Matrix;

inline Matrix example_a() {
    return {{1, 0}, {1, 0}, {-2, 1}, {-1, 1}, {1, 1}, {2, 1}, {0, 1}, {0, 1}};
}
inline Matrix example_b() {
    return {{1, 0, -1}, {1, 0, 0}, {-1, 1, 0}, {0, 1, 0}, {0, -1, 1}, {0, 0, 1}};
}
inline Matrix example_c() {
    return {{1, 0, 1}, {1, 0, 0}, {-1, 1, 0}, {0, 1, 0}, {0, -1, 1}, {0, 0, 1}};
}
inline Matrix example_d() {
    return {{-1, 1, 0, 0}, {1, 0, 0, 0}, {1, 2, 0, 0},  {0, 1, 1, 0},
            {3, -1, 1, 0}, {0, 0, 2, -1}, {0, 0, 1, 0}, {0, 0, -1, 3}};
}
inline Matrix example_g_for_b() { return {{1, 0, 1}, {1, 1, 0}, {1, 0, 0}}; }
inline Matrix example_g_for_d_block1() { return {{1, 0}, {1, 1}}; }

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
    return e;
}

inline int eigen_rank(const Eigen::MatrixXd& e, double threshold = 1e-9) {
    if (e.rows() == 0 || e.cols() == 0) return 0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
    lu.setThreshold(threshold);
    return static_cast<int>(lu.rank());
}

inline int eigen_rank(const Matrix& m, double threshold = 1e-9) {
    return eigen_rank(to_eigen(m), threshold);
}

inline Eigen::MatrixXd rows_of(const Matrix& m, std::uint64_t mask) {
    std::vector<int> rows;
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (mask >> r & 1U) rows.push_back(static_cast<int>(r));
    Eigen::MatrixXd out(rows.size(), m.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t c = 0; c < m.cols(); ++c) out(static_cast<int>(k), static_cast<int>(c)) = m(rows[k], c);
    return out;
}

struct Elementary {
    std::uint64_t support = 0;  // row bitmask
    Eigen::VectorXd coeff;
    int size() const { return __builtin_popcountll(support); }
};

/// Minimal achievable supports by scanning every row mask.
inline std::vector<Elementary> minimal_supports(const Matrix& m) {
    const int n = static_cast<int>(m.cols());
    const std::uint64_t all = (std::uint64_t{1} << m.rows()) - 1;
    std::vector<bool> achievable(all + 1, false);
    for (std::uint64_t t = 1; t <= all; ++t)
        achievable[t] = eigen_rank(rows_of(m, all & ~t)) < n;
    std::vector<Elementary> out;
    for (std::uint64_t t = 1; t <= all; ++t) {
        if (!achievable[t]) continue;
        bool minimal = true;
        for (std::size_t r = 0; r < m.rows() && minimal; ++r)
            if ((t >> r & 1U) && achievable[t & ~(std::uint64_t{1} << r)]) minimal = false;
        if (!minimal) continue;
        if (t == all) {
            out.push_back({t, Eigen::VectorXd::Unit(n, 0)});
            continue;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(rows_of(m, all & ~t));
        lu.setThreshold(1e-9);
        Eigen::MatrixXd kernel = lu.kernel();
        out.push_back({t, kernel.col(0)});
    }
    return out;
}

/// Cheapest basis drawn from `vectors` by trying every subset of size n.
inline int exhaustive_best_cost(const std::vector<Elementary>& vectors, int n) {
    int best = -1;
    std::vector<int> idx(n);
    const int count = static_cast<int>(vectors.size());
    std::function<void(int, int, int)> rec = [&](int from, int depth, int cost) {
        if (best >= 0 && cost >= best) return;
        if (depth == n) {
            Eigen::MatrixXd g(n, n);
            for (int k = 0; k < n; ++k) g.col(k) = vectors[idx[k]].coeff.normalized();
            if (eigen_rank(g, 1e-9) == n) best = cost;
            return;
        }
        for (int k = from; k < count; ++k) {
            idx[depth] = k;
            rec(k + 1, depth + 1, cost + vectors[k].size());
        }
    };
    rec(0, 0, 0);
    return best;
}

/// Random matrix with entries from {-2,-1,0,1,2} weighted towards zero.
inline Matrix random_sparse_integer(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                    double zero_prob = 0.4) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> v(-2, 2);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            if (u(rng) < zero_prob) continue;
            int x = 0;
            while (x == 0) x = v(rng);
            m(r, c) = x;
        }
    return m;
}

using Cell = std::vector<std::size_t>;

/// Breadth-first flood fill over a set of cells with orthogonal adjacency.
inline std::size_t count_components(const std::set<Cell>& cells) {
    std::set<Cell> seen;
    std::size_t count = 0;
    for (const auto& start : cells) {
        if (seen.count(start)) continue;
        ++count;
        std::vector<Cell> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            Cell cur = queue.back();
            queue.pop_back();
            for (std::size_t axis = 0; axis < cur.size(); ++axis)
                for (int step : {-1, 1}) {
                    Cell next = cur;
                    if (step < 0 && next[axis] == 0) continue;
                    next[axis] += step;
                    if (cells.count(next) && !seen.count(next)) {
                        seen.insert(next);
                        queue.push_back(next);
                    }
                }
        }
    }
    return count;
}

/// Whether every nonempty k-slice of `cells` is connected.
inline bool all_slices_connected(const std::set<Cell>& cells, std::size_t axes, std::size_t k) {
    for (std::uint64_t free = 0; free < (std::uint64_t{1} << axes); ++free) {
        if (static_cast<std::size_t>(__builtin_popcountll(free)) != k) continue;
        std::map<Cell, std::set<Cell>> slices;
        for (const auto& c : cells) {
            Cell key;
            for (std::size_t a = 0; a < axes; ++a)
                if (!(free >> a & 1U)) key.push_back(c[a]);
            slices[key].insert(c);
        }
        for (const auto& [key, members] : slices)
            if (count_components(members) != 1) return false;
    }
    return true;
}

}  // namespace oracle
