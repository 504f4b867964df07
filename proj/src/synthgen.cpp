#include "mechindep/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mechindep/errors.hpp"
#include "mechindep/linalg.hpp"

namespace mechindep {

namespace {

// Doubles straight from the 64-bit engine output, so values do not depend on
// the standard library's distribution implementations.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double sign() { return rng_() >> 63 ? -1.0 : 1.0; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

private:
    std::mt19937_64 rng_;
};

std::vector<double> evaluate(const EvalFunction& f, std::span<const double> x) {
    auto y = f(x);
    if (y.empty()) throw EvalError("function returned an empty vector");
    for (double v : y)
        if (!std::isfinite(v)) throw EvalError("function returned a non-finite value");
    return y;
}

}  // namespace

std::size_t OverlapTemplate::pairwise_rows() const {
    if (!(overlap >= 0.0 && overlap < 1.0)) throw InvalidInput("overlap ratio must lie in [0, 1)");
    if (overlap == 0.0) return 0;
    const double raw = overlap / (1.0 - overlap) * static_cast<double>(slot_out);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(raw)));
}

Json OverlapTemplate::to_json() const {
    return {{"K", slots},
            {"slotDim", slot_dim},
            {"slotOut", slot_out},
            {"overlapRatio", overlap},
            {"seed", seed}};
}

OverlapTemplate OverlapTemplate::from_json(const Json& j) {
    OverlapTemplate t;
    try {
        t.slots = j.at("K").get<std::size_t>();
        t.slot_dim = j.value("slotDim", t.slot_dim);
        t.slot_out = j.value("slotOut", t.slot_out);
        t.overlap = j.value("overlapRatio", t.overlap);
        t.seed = j.value("seed", t.seed);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed template: ") + e.what());
    }
    return t;
}

Json GeneratedInstance::sidecar() const {
    Json groups = Json::array();
    for (const auto& g : row_groups)
        groups.push_back({{"slots", g.slots}, {"firstRow", g.first_row}, {"rows", g.rows}});
    Json edges = Json::array();
    for (const auto& [a, b] : expected.block_edges) edges.push_back({a, b});
    return {{"template", source.to_json()},
            {"blocks", blocks.dims()},
            {"rows", jacobian.rows()},
            {"rowGroups", groups},
            {"allocation",
             {{"pairwiseRows", source.pairwise_rows()},
              {"rule", "pairwise rows = max(1, round(overlap / (1 - overlap) * slotOut)) for "
                       "overlap > 0, else 0"}}},
            {"expectedVerdicts",
             {{"D", expected.type_d},
              {"M", expected.type_m},
              {"columnComponents", expected.column_components},
              {"blockAdjacency", edges}}}};
}

GeneratedInstance gen_overlap_jacobian(const OverlapTemplate& t) {
    if (t.slots < 2) throw InvalidInput("template needs at least two slots");
    if (t.slot_dim == 0 || t.slot_out == 0) throw InvalidInput("slot sizes must be positive");
    const std::size_t p = t.pairwise_rows();
    if (p > t.slot_out)
        throw InvalidInput("overlap " + std::to_string(t.overlap) + " needs " + std::to_string(p) +
                           " pairwise rows, more than slotOut = " + std::to_string(t.slot_out));

    GeneratedInstance inst;
    inst.source = t;
    inst.blocks = BlockSpec(std::vector<std::size_t>(t.slots, t.slot_dim));
    std::size_t row = 0;
    for (std::size_t i = 0; i < t.slots; ++i) {
        inst.row_groups.push_back({{i + 1}, row + 1, t.slot_out});
        row += t.slot_out;
        if (i + 1 < t.slots && p > 0) {
            inst.row_groups.push_back({{i + 1, i + 2}, row + 1, p});
            row += p;
        }
    }

    Matrix j(row, t.slots * t.slot_dim);
    Draw draw(t.seed);
    for (const auto& g : inst.row_groups)
        for (std::size_t r = g.first_row - 1; r < g.first_row - 1 + g.rows; ++r)
            for (std::size_t s : g.slots)
                for (std::size_t col : inst.blocks.columns(s - 1)) j(r, col) = draw.sign() * draw.uniform(0.5, 2.0);
    inst.jacobian = j;

    inst.expected.type_d = p == 0;
    inst.expected.type_m = true;
    inst.expected.column_components = p == 0 ? t.slots : 1;
    if (p > 0)
        for (std::size_t i = 1; i < t.slots; ++i) inst.expected.block_edges.emplace_back(i, i + 1);
    return inst;
}

EvalFunction planted_generator(const Matrix& weights) {
    return [weights](std::span<const double> s) {
        if (s.size() != weights.cols()) throw EvalError("point has wrong dimension");
        auto u = weights * s;
        for (double& v : u) v += 0.5 * v * v;
        return u;
    };
}

DerivativeTensor planted_generator_hessian(const Matrix& weights, std::span<const double> point) {
    if (point.size() != weights.cols()) throw ShapeError("point has wrong dimension");
    // d^2/ds_a ds_b of u + u^2/2 is w_a w_b, independent of the point.
    DerivativeTensor h(2, weights.rows(), weights.cols());
    for (std::size_t r = 0; r < weights.rows(); ++r)
        for (std::size_t a = 0; a < weights.cols(); ++a)
            for (std::size_t b = 0; b < weights.cols(); ++b) {
                const std::size_t idx[2] = {a, b};
                h.at(r, idx) = weights(r, a) * weights(r, b);
            }
    return h;
}

EvalFunction random_additive_function(const BlockSpec& blocks, std::size_t outputs,
                                      std::uint64_t seed, double interaction) {
    if (outputs == 0) throw InvalidInput("function needs at least one output");
    if (interaction != 0.0 && blocks.count() < 2)
        throw InvalidInput("an interaction term needs two blocks");
    struct Term {
        std::size_t a, b;  // within one block; a == b gives a univariate term
        int kind;
        double scale, freq, phase;
    };
    Draw draw(seed);
    std::vector<std::vector<Term>> terms(outputs);
    for (auto& row : terms)
        for (std::size_t k = 0; k < blocks.count(); ++k) {
            const auto cols = blocks.columns(k);
            for (std::size_t q = 0; q < 2; ++q) {
                const std::size_t a = cols[draw.below(cols.size())];
                const std::size_t b = cols[draw.below(cols.size())];
                row.push_back({a, b, static_cast<int>(draw.below(3)), draw.sign() * draw.uniform(0.5, 2.0),
                               draw.uniform(0.5, 1.5), draw.uniform(0.0, 3.0)});
            }
        }
    const std::size_t ia = blocks.count() >= 2 ? blocks.first(0) : 0;
    const std::size_t ib = blocks.count() >= 2 ? blocks.first(1) : 0;
    const std::size_t dim = blocks.total();
    return [terms, interaction, ia, ib, dim](std::span<const double> s) {
        if (s.size() != dim) throw EvalError("point has wrong dimension");
        std::vector<double> y(terms.size(), 0.0);
        for (std::size_t r = 0; r < terms.size(); ++r)
            for (const auto& t : terms[r]) {
                const double x = t.a == t.b ? s[t.a] : s[t.a] * s[t.b];
                switch (t.kind) {
                    case 0: y[r] += t.scale * std::sin(t.freq * x + t.phase); break;
                    case 1: y[r] += t.scale * x * x * x / 3.0; break;
                    default: y[r] += t.scale * std::cos(t.freq * x + t.phase); break;
                }
            }
        y[0] += interaction * s[ia] * s[ib];
        return y;
    };
}

MixingDraw random_mixing(const BlockSpec& blocks, MixingKind kind, std::uint64_t seed) {
    const std::size_t n = blocks.total();
    Draw draw(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        MixingDraw out{Matrix(n, n), {}};
        out.block_map.resize(blocks.count());
        for (std::size_t k = 0; k < blocks.count(); ++k) out.block_map[k] = k + 1;

        if (kind == MixingKind::full) {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) out.matrix(a, b) = draw.uniform(-1.0, 1.0);
        } else {
            if (kind == MixingKind::block_permuted) {
                // Fisher-Yates within each class of equal-dimension blocks.
                std::vector<std::size_t> order(blocks.count());
                for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
                for (std::size_t k = order.size(); k-- > 1;) {
                    const std::size_t q = draw.below(k + 1);
                    if (blocks.dim(order[k]) == blocks.dim(order[q])) std::swap(order[k], order[q]);
                }
                for (std::size_t k = 0; k < order.size(); ++k) out.block_map[k] = order[k] + 1;
            }
            for (std::size_t k = 0; k < blocks.count(); ++k) {
                const auto rows = blocks.columns(k);
                const auto cols = blocks.columns(out.block_map[k] - 1);
                for (std::size_t r : rows)
                    for (std::size_t c : cols) out.matrix(r, c) = draw.uniform(-1.0, 1.0);
            }
        }
        const auto inv = linalg::inverse(out.matrix, 1e-12);
        if (!inv) continue;
        if (linalg::norm1(out.matrix) * linalg::norm1(*inv) <= 1e6) return out;
    }
    throw GenerationError("no well-conditioned mixing within 100 draws");
}

Matrix fd_jacobian(const EvalFunction& f, std::span<const double> point, double step) {
    if (!(step > 0.0)) throw InvalidInput("finite-difference step must be positive");
    if (point.empty()) throw InvalidInput("point must be nonempty");
    const std::size_t m = evaluate(f, point).size();
    Matrix j(m, point.size());
    std::vector<double> x(point.begin(), point.end());
    for (std::size_t a = 0; a < x.size(); ++a) {
        x[a] = point[a] + step;
        const auto plus = evaluate(f, x);
        x[a] = point[a] - step;
        const auto minus = evaluate(f, x);
        x[a] = point[a];
        if (plus.size() != m || minus.size() != m) throw EvalError("output dimension changed");
        for (std::size_t r = 0; r < m; ++r) j(r, a) = (plus[r] - minus[r]) / (2.0 * step);
    }
    return j;
}

DerivativeTensor fd_hessian(const EvalFunction& f, std::span<const double> point, double step) {
    if (!(step > 0.0)) throw InvalidInput("finite-difference step must be positive");
    if (point.empty()) throw InvalidInput("point must be nonempty");
    const std::size_t m = evaluate(f, point).size();
    const std::size_t n = point.size();
    DerivativeTensor h(2, m, n);
    std::vector<double> x(point.begin(), point.end());
    const auto probe = [&](std::size_t a, double da, std::size_t b, double db) {
        x[a] += da;
        x[b] += db;
        auto y = evaluate(f, x);
        x[a] = point[a];
        x[b] = point[b];
        if (y.size() != m) throw EvalError("output dimension changed");
        return y;
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const auto pp = probe(a, step, b, step);
            const auto pm = probe(a, step, b, -step);
            const auto mp = probe(a, -step, b, step);
            const auto mm = probe(a, -step, b, -step);
            for (std::size_t r = 0; r < m; ++r) {
                const double v = (pp[r] - pm[r] - mp[r] + mm[r]) / (4.0 * step * step);
                const std::size_t ab[2] = {a, b};
                const std::size_t ba[2] = {b, a};
                h.at(r, ab) = v;
                h.at(r, ba) = v;
            }
        }
    return h;
}

}  // namespace mechindep
