#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wvx/bit_vector.hpp"

namespace wvx {

// Elias-Fano encoded set of positions in [1, universe].
//
// Each stored position x (0-based x-1) is split into its low
// floor(log2(universe/ones)) bits, packed densely, and its high part, written
// in unary into a plain bit_vector: the j-th one sits at high(x_j) + j - 1.
// select1 is one select on the high bits; rank1 is one select0 plus a short
// scan of the bucket.
class sparse_bit_vector {
public:
    sparse_bit_vector() = default;
    // `positions` must be strictly increasing and within [1, universe].
    sparse_bit_vector(std::span<const std::size_t> positions, std::size_t universe);

    std::size_t size() const { return universe_; }
    std::size_t ones() const { return ones_; }

    bool access(std::size_t i) const;
    std::size_t rank1(std::size_t i) const;
    std::optional<std::size_t> select1(std::size_t j) const;

    std::size_t size_in_bits() const;

    void save(std::ostream& out) const;
    static sparse_bit_vector load(std::istream& in);

private:
    std::size_t low(std::size_t j) const;  // 0-based index

    std::size_t universe_ = 0;
    std::size_t ones_ = 0;
    std::size_t low_width_ = 0;
    bit_vector high_;
    std::vector<std::uint64_t> lows_;
};

}  // namespace wvx
