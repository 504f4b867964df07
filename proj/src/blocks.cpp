#include "mechindep/blocks.hpp"

#include <charconv>

#include "mechindep/errors.hpp"

namespace mechindep {

BlockSpec::BlockSpec(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw InvalidInput("block spec needs at least one block");
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i] == 0) throw InvalidInput("block dimensions must be positive");
        offsets_.push_back(total_);
        for (std::size_t k = 0; k < dims_[i]; ++k) owner_.push_back(i);
        total_ += dims_[i];
    }
}

BlockSpec BlockSpec::parse(std::string_view text) {
    std::vector<std::size_t> dims;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string_view token = text.substr(pos, comma - pos);
        std::size_t value = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size())
            throw InvalidInput("bad block list '" + std::string(text) + "'");
        dims.push_back(value);
        pos = comma + 1;
    }
    return BlockSpec(std::move(dims));
}

BlockSpec BlockSpec::singletons(std::size_t count) {
    return BlockSpec(std::vector<std::size_t>(count, 1));
}

std::vector<std::size_t> BlockSpec::columns(std::size_t block) const {
    std::vector<std::size_t> out(dim(block));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = offsets_[block] + k;
    return out;
}

std::size_t BlockSpec::block_of(std::size_t column) const { return owner_.at(column); }

void BlockSpec::require_columns(std::size_t cols) const {
    if (cols != total_)
        throw ShapeError("blocks " + to_string() + " cover " + std::to_string(total_) +
                         " columns, matrix has " + std::to_string(cols));
}

std::string BlockSpec::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dims_[i]);
    }
    return out;
}

}  // namespace mechindep
