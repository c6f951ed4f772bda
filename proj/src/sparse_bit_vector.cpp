#include "wvx/sparse_bit_vector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "wvx/serialize.hpp"

namespace wvx {

sparse_bit_vector::sparse_bit_vector(std::span<const std::size_t> positions, std::size_t universe)
    : universe_(universe), ones_(positions.size()) {
    if (ones_ > 0 && universe_ > ones_)
        low_width_ = static_cast<std::size_t>(std::bit_width(universe_ / ones_)) - 1;

    const std::size_t high_len = ones_ + (universe_ >> low_width_) + 1;
    bit_vector_builder high(high_len);
    lows_.assign((ones_ * low_width_ + 63) / 64, 0);

    std::size_t prev = 0;
    for (std::size_t j = 0; j < ones_; ++j) {
        const std::size_t p = positions[j];
        if (p == 0 || p > universe_) throw std::out_of_range("sparse_bit_vector: position " + std::to_string(p));
        if (j > 0 && p <= prev) throw std::invalid_argument("sparse_bit_vector: positions must be strictly increasing");
        prev = p;
        const std::size_t x = p - 1;
        high.set((x >> low_width_) + j + 1);
        if (low_width_ > 0) {
            const std::uint64_t lowbits = x & ((std::uint64_t{1} << low_width_) - 1);
            const std::size_t bit = j * low_width_;
            lows_[bit / 64] |= lowbits << (bit % 64);
            if (bit % 64 + low_width_ > 64) lows_[bit / 64 + 1] |= lowbits >> (64 - bit % 64);
        }
    }
    high_ = std::move(high).build();
}

std::size_t sparse_bit_vector::low(std::size_t j) const {
    if (low_width_ == 0) return 0;
    const std::size_t bit = j * low_width_;
    std::uint64_t v = lows_[bit / 64] >> (bit % 64);
    if (bit % 64 + low_width_ > 64) v |= lows_[bit / 64 + 1] << (64 - bit % 64);
    return static_cast<std::size_t>(v & ((std::uint64_t{1} << low_width_) - 1));
}

std::optional<std::size_t> sparse_bit_vector::select1(std::size_t j) const {
    if (j == 0 || j > ones_) return std::nullopt;
    const std::size_t hpos = *high_.select1(j);  // 1-based
    const std::size_t high_part = hpos - j;
    return ((high_part << low_width_) | low(j - 1)) + 1;
}

std::size_t sparse_bit_vector::rank1(std::size_t i) const {
    if (i > universe_) throw std::out_of_range("sparse_bit_vector::rank1: position " + std::to_string(i));
    if (i == universe_) return ones_;
    // Count stored 0-based values strictly below x = i.
    const std::size_t x = i;
    const std::size_t bucket = x >> low_width_;
    const std::size_t target_low = low_width_ ? (x & ((std::size_t{1} << low_width_) - 1)) : 0;
    std::size_t j = 0;        // ones in earlier buckets
    std::size_t scan = 0;     // 0-based index into high_ where the bucket begins
    if (bucket > 0) {
        const std::size_t zpos = *high_.select0(bucket);
        j = zpos - bucket;
        scan = zpos;
    }
    while (scan < high_.size() && high_.access(scan + 1)) {
        if (low(j) >= target_low) break;
        ++j;
        ++scan;
    }
    return j;
}

bool sparse_bit_vector::access(std::size_t i) const {
    if (i == 0 || i > universe_) throw std::out_of_range("sparse_bit_vector::access: position " + std::to_string(i));
    return rank1(i) != rank1(i - 1);
}

std::size_t sparse_bit_vector::size_in_bits() const {
    return high_.payload_bits() + high_.aux_bits() + lows_.size() * 64 + 3 * 64;
}

void sparse_bit_vector::save(std::ostream& out) const {
    io::put_u64(out, universe_);
    io::put_u64(out, ones_);
    io::put_u64(out, low_width_);
    high_.save(out);
    io::put_words(out, lows_);
}

sparse_bit_vector sparse_bit_vector::load(std::istream& in) {
    sparse_bit_vector s;
    s.universe_ = io::get_u64(in);
    s.ones_ = io::get_u64(in);
    s.low_width_ = io::get_u64(in);
    if (s.low_width_ >= 64) throw io::format_error("sparse_bit_vector: bad low width");
    s.high_ = bit_vector::load(in);
    s.lows_ = io::get_words(in);
    if (s.high_.ones() != s.ones_ || s.lows_.size() != (s.ones_ * s.low_width_ + 63) / 64)
        throw io::format_error("sparse_bit_vector: inconsistent sizes");
    return s;
}

}  // namespace wvx
