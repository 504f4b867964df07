#include "mechindep/topology.hpp"

#include <algorithm>
#include <string>

#include "mechindep/errors.hpp"

namespace mechindep {

GridRegion::GridRegion(std::vector<std::size_t> dims, std::vector<bool> occupied)
    : dims_(std::move(dims)), occupied_(std::move(occupied)) {
    if (dims_.empty()) throw InvalidInput("region needs at least one axis");
    std::size_t total = 1;
    for (std::size_t d : dims_) {
        if (d == 0) throw InvalidInput("region axes must have positive length");
        total *= d;
    }
    if (occupied_.size() != total)
        throw ShapeError("occupancy has " + std::to_string(occupied_.size()) + " cells, expected " +
                         std::to_string(total));
    if (occupied_count() == 0) throw InvalidInput("region has no occupied cell");
}

GridRegion GridRegion::from_cells(std::vector<std::size_t> dims,
                                  const std::vector<std::vector<std::size_t>>& cells) {
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    std::vector<bool> occ(total, false);
    for (const auto& c : cells) {
        if (c.size() != dims.size()) throw ShapeError("cell coordinate has wrong arity");
        std::size_t lin = 0;
        for (std::size_t a = 0; a < dims.size(); ++a) {
            if (c[a] >= dims[a]) throw InvalidInput("cell coordinate out of range");
            lin = lin * dims[a] + c[a];
        }
        occ[lin] = true;
    }
    return GridRegion(std::move(dims), std::move(occ));
}

std::size_t GridRegion::occupied_count() const noexcept {
    return static_cast<std::size_t>(std::count(occupied_.begin(), occupied_.end(), true));
}

std::size_t GridRegion::linear(const std::vector<std::size_t>& coords) const {
    if (coords.size() != dims_.size()) throw ShapeError("coordinate has wrong arity");
    std::size_t lin = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        if (coords[a] >= dims_[a]) throw InvalidInput("coordinate out of range");
        lin = lin * dims_[a] + coords[a];
    }
    return lin;
}

std::vector<std::size_t> GridRegion::coords(std::size_t linear) const {
    std::vector<std::size_t> out(dims_.size());
    for (std::size_t a = dims_.size(); a-- > 0;) {
        out[a] = linear % dims_[a];
        linear /= dims_[a];
    }
    return out;
}

bool GridRegion::occupied(const std::vector<std::size_t>& c) const { return occupied_[linear(c)]; }

std::vector<std::vector<std::size_t>> GridRegion::cells() const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t k = 0; k < occupied_.size(); ++k)
        if (occupied_[k]) out.push_back(coords(k));
    return out;
}

namespace {

// Components of `members` (sorted linear indices of occupied cells) when moves
// are allowed along `axes` only.
std::size_t count_components(const GridRegion& region, const std::vector<std::size_t>& members,
                             const std::vector<std::size_t>& axes) {
    std::vector<std::size_t> stride(region.axes(), 1);
    for (std::size_t a = region.axes() - 1; a-- > 0;) stride[a] = stride[a + 1] * region.dims()[a + 1];

    std::vector<bool> seen(region.cell_count(), false);
    std::size_t comps = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start : members) {
        if (seen[start]) continue;
        ++comps;
        seen[start] = true;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t cell = stack.back();
            stack.pop_back();
            const auto c = region.coords(cell);
            for (std::size_t a : axes) {
                if (c[a] > 0) {
                    const std::size_t n = cell - stride[a];
                    if (region.occupied_at(n) && !seen[n]) {
                        seen[n] = true;
                        stack.push_back(n);
                    }
                }
                if (c[a] + 1 < region.dims()[a]) {
                    const std::size_t n = cell + stride[a];
                    if (region.occupied_at(n) && !seen[n]) {
                        seen[n] = true;
                        stack.push_back(n);
                    }
                }
            }
        }
    }
    return comps;
}

}  // namespace

bool is_connected(const GridRegion& region) {
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < region.cell_count(); ++k)
        if (region.occupied_at(k)) members.push_back(k);
    std::vector<std::size_t> axes(region.axes());
    for (std::size_t a = 0; a < axes.size(); ++a) axes[a] = a;
    return count_components(region, members, axes) == 1;
}

SliceReport slices_connected(const GridRegion& region, std::size_t k) {
    const std::size_t K = region.axes();
    if (K < 2) throw InvalidInput("slice analysis needs at least two axes");
    if (k < 1 || k >= K)
        throw InvalidInput("slice order must satisfy 1 <= k < " + std::to_string(K));

    SliceReport report;
    report.k = k;
    // Free-axis subsets in lexicographic order.
    std::vector<bool> pick(K, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<std::size_t> free_axes, fixed_axes;
        for (std::size_t a = 0; a < K; ++a) (pick[a] ? free_axes : fixed_axes).push_back(a);

        // Group occupied cells by their fixed coordinates.
        std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
        {
            std::vector<std::pair<std::vector<std::size_t>, std::size_t>> keyed;
            for (std::size_t cell = 0; cell < region.cell_count(); ++cell) {
                if (!region.occupied_at(cell)) continue;
                const auto c = region.coords(cell);
                std::vector<std::size_t> key;
                for (std::size_t a : fixed_axes) key.push_back(c[a]);
                keyed.emplace_back(std::move(key), cell);
            }
            std::stable_sort(keyed.begin(), keyed.end(),
                             [](const auto& x, const auto& y) { return x.first < y.first; });
            for (auto& [key, cell] : keyed) {
                if (groups.empty() || groups.back().first != key) groups.push_back({key, {}});
                groups.back().second.push_back(cell);
            }
        }
        for (const auto& [key, members] : groups) {
            SliceVerdict v;
            for (std::size_t a : free_axes) v.free_axes.push_back(a + 1);
            for (std::size_t q = 0; q < fixed_axes.size(); ++q)
                v.fixed.emplace_back(fixed_axes[q] + 1, key[q]);
            v.cells = members.size();
            v.components = count_components(region, members, free_axes);
            v.connected = v.components == 1;
            report.all_connected = report.all_connected && v.connected;
            report.slices.push_back(std::move(v));
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return report;
}

Certificate premise_report(const GridRegion& region) {
    Certificate c;
    c.criterion = Criterion::topology;
    c.inputs_digest = digest_bytes(to_json(region).dump());

    const bool connected = is_connected(region);
    Json slices = Json::object();
    bool slices_ok = true;
    if (region.axes() >= 2) {
        const auto report = slices_connected(region, region.axes() - 1);
        slices_ok = report.all_connected;
        Json bad = Json::array();
        for (const auto& s : report.slices) {
            if (s.connected) continue;
            Json fixed = Json::array();
            for (const auto& [axis, coord] : s.fixed) fixed.push_back({{"axis", axis}, {"coord", coord}});
            bad.push_back({{"freeAxes", s.free_axes}, {"fixed", fixed}, {"components", s.components}});
        }
        slices = {{"k", report.k},
                  {"count", report.slices.size()},
                  {"allConnected", report.all_connected},
                  {"disconnected", bad}};
    } else {
        c.notes.push_back("one axis: there are no (K-1)-slices to check");
    }
    c.holds = connected && slices_ok;
    c.witness = {{"regionConnected", connected}, {"slices", slices}};
    c.notes.push_back("local injectivity of the generator is outside grid scope and must be "
                      "asserted by the caller");
    c.notes.push_back("verdicts concern the grid discretization, not the continuum region");
    return c;
}

Json to_json(const GridRegion& region) {
    return {{"dims", region.dims()}, {"occupied", region.cells()}};
}

GridRegion region_from_json(const Json& j) {
    try {
        const auto dims = j.at("dims").get<std::vector<std::size_t>>();
        const auto cells = j.at("occupied").get<std::vector<std::vector<std::size_t>>>();
        return GridRegion::from_cells(dims, cells);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed region: ") + e.what());
    }
}

}  // namespace mechindep
