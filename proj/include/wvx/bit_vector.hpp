#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace wvx {

// Static bit array with rank/select.
//
// Public positions are 1-based: access(i) reads bit i, rank1(i) counts ones
// in bits 1..i, select1(j) returns the position of the j-th one. Storage is
// 0-based 64-bit words.
//
// Rank uses one 512-bit superblock per 128 bits of samples (an absolute
// count plus seven packed 9-bit word offsets), which keeps the auxiliary
// index at 25% of the payload. Vectors of at most 512 bits keep no samples
// and are scanned directly. Select binary-searches the superblock counts and
// finishes inside a word.
class bit_vector {
public:
    bit_vector() = default;
    explicit bit_vector(const std::vector<bool>& bits);
    bit_vector(std::vector<std::uint64_t> words, std::size_t len);

    // "0010..." with any other character rejected.
    static bit_vector from_string(std::string_view bits);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }
    std::size_t ones() const { return ones_; }
    std::size_t zeros() const { return len_ - ones_; }

    bool access(std::size_t i) const;
    bool operator[](std::size_t i) const { return access(i); }

    std::size_t rank1(std::size_t i) const;
    std::size_t rank0(std::size_t i) const { return i - rank1(i); }

    std::optional<std::size_t> select1(std::size_t j) const;
    std::optional<std::size_t> select0(std::size_t j) const;

    // Space accounting, in bits.
    std::size_t payload_bits() const { return len_; }
    std::size_t aux_bits() const { return samples_.size() * 64; }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::string to_string() const;

    void save(std::ostream& out) const;
    static bit_vector load(std::istream& in);

    friend bool operator==(const bit_vector& a, const bit_vector& b) {
        return a.len_ == b.len_ && a.words_ == b.words_;
    }

private:
    static constexpr std::size_t kSuperBits = 512;
    static constexpr std::size_t kWordsPerSuper = kSuperBits / 64;

    void build_index();
    std::size_t rank1_unchecked(std::size_t i) const;
    template <bool Ones>
    std::optional<std::size_t> select_impl(std::size_t j) const;

    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
    std::size_t ones_ = 0;
    // Two words per superblock: absolute rank, then packed 9-bit offsets of
    // words 1..7 within the superblock. Empty for short vectors.
    std::vector<std::uint64_t> samples_;
};

// Accumulates bits one at a time before freezing into a bit_vector.
class bit_vector_builder {
public:
    bit_vector_builder() = default;
    explicit bit_vector_builder(std::size_t len) : words_((len + 63) / 64, 0), len_(len) {}

    void push_back(bool bit) {
        if (len_ % 64 == 0) words_.push_back(0);
        if (bit) words_.back() |= std::uint64_t{1} << (len_ % 64);
        ++len_;
    }
    // 1-based.
    void set(std::size_t i) { words_[(i - 1) / 64] |= std::uint64_t{1} << ((i - 1) % 64); }
    std::size_t size() const { return len_; }

    bit_vector build() && { return bit_vector(std::move(words_), len_); }

private:
    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
};

}  // namespace wvx
