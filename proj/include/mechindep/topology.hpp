#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "mechindep/certificate.hpp"

// Connectivity of latent regions discretized on occupancy grids, one axis per
// factor. Cells are adjacent when they differ by one along a single axis.
// Verdicts describe the grid, not the continuum it approximates.
namespace mechindep {

class GridRegion {
public:
    /// `occupied` is indexed row-major over `dims` (last axis fastest).
    GridRegion(std::vector<std::size_t> dims, std::vector<bool> occupied);

    /// Region from a list of 0-based cell coordinates.
    static GridRegion from_cells(std::vector<std::size_t> dims,
                                 const std::vector<std::vector<std::size_t>>& cells);

    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t axes() const noexcept { return dims_.size(); }
    std::size_t cell_count() const noexcept { return occupied_.size(); }
    std::size_t occupied_count() const noexcept;

    bool occupied(const std::vector<std::size_t>& coords) const;
    bool occupied_at(std::size_t linear) const { return occupied_[linear]; }

    std::size_t linear(const std::vector<std::size_t>& coords) const;
    std::vector<std::size_t> coords(std::size_t linear) const;

    /// Occupied cells as coordinate lists, in linear order.
    std::vector<std::vector<std::size_t>> cells() const;

private:
    std::vector<std::size_t> dims_;
    std::vector<bool> occupied_;
};

bool is_connected(const GridRegion& region);

struct SliceVerdict {
    std::vector<std::size_t> free_axes;                     // 1-based
    std::vector<std::pair<std::size_t, std::size_t>> fixed;  // (1-based axis, 0-based coordinate)
    std::size_t cells = 0;
    std::size_t components = 0;
    bool connected = false;
};

struct SliceReport {
    std::size_t k = 0;
    std::vector<SliceVerdict> slices;  // nonempty slices only
    bool all_connected = true;
};

/// Every nonempty k-slice (k free axes, the others held fixed), 1 <= k < K.
SliceReport slices_connected(const GridRegion& region, std::size_t k);

/// Region connectivity plus connectivity of every (K-1)-slice.
Certificate premise_report(const GridRegion& region);

Json to_json(const GridRegion& region);
GridRegion region_from_json(const Json& j);

}  // namespace mechindep
