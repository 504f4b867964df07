#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mechindep {

/// Partition of the column indices into contiguous factor blocks.
/// Block i (0-based here, 1-based in reports) owns columns
/// [first(i), first(i) + dim(i)).
class BlockSpec {
public:
    explicit BlockSpec(std::vector<std::size_t> dims);

    /// Parses a comma list such as "3,3,3".
    static BlockSpec parse(std::string_view text);
    /// K blocks of size one.
    static BlockSpec singletons(std::size_t count);

    std::size_t count() const noexcept { return dims_.size(); }
    std::size_t total() const noexcept { return total_; }
    std::size_t dim(std::size_t block) const { return dims_.at(block); }
    std::size_t first(std::size_t block) const { return offsets_.at(block); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    /// 0-based column indices of a block.
    std::vector<std::size_t> columns(std::size_t block) const;
    /// Block owning a 0-based column.
    std::size_t block_of(std::size_t column) const;

    /// Throws ShapeError unless total() == cols.
    void require_columns(std::size_t cols) const;

    std::string to_string() const;

    bool operator==(const BlockSpec& other) const { return dims_ == other.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> owner_;
    std::size_t total_ = 0;
};

}  // namespace mechindep
