#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "wvx/bit_vector.hpp"
#include "wvx/sparse_bit_vector.hpp"
#include "wvx/stats.hpp"

namespace wvx {

using symbol_t = std::uint64_t;

// Closed 1-based interval [lo, hi]; empty when lo > hi.
struct interval {
    std::size_t lo = 1;
    std::size_t hi = 0;

    bool empty() const { return lo > hi; }
    std::size_t length() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(std::size_t x) const { return lo <= x && x <= hi; }
    friend bool operator==(const interval&, const interval&) = default;
};

struct symbol_count {
    symbol_t symbol;
    std::size_t count;
    friend bool operator==(const symbol_count&, const symbol_count&) = default;
};

// A node of the wavelet tree, addressed arithmetically inside its level
// bitmap. Codes are 0-based indices of present symbols; [lo, hi] is the code
// range below the node.
struct wt_node {
    std::size_t depth = 0;
    std::size_t begin = 0;         // 0-based offset of the node's first bit in its level
    std::size_t size = 0;          // number of sequence positions under the node
    std::size_t lo = 0, hi = 0;    // code range, inclusive
    std::size_t zeros_before = 0;  // rank0 of the level bitmap at `begin`

    bool is_leaf() const { return lo == hi; }
    std::size_t mid() const { return lo + (hi - lo) / 2; }
};

// Maps sequence symbols in [1, sigma] to dense codes [0, u).
class alphabet_map {
public:
    alphabet_map() = default;
    alphabet_map(std::span<const symbol_t> present, symbol_t sigma);

    symbol_t sigma() const { return sigma_; }
    std::size_t distinct() const { return distinct_; }
    bool is_sparse() const { return std::holds_alternative<sparse_bit_vector>(bits_); }

    // Number of present symbols <= s, for s in [0, sigma].
    std::size_t rank(symbol_t s) const;
    symbol_t symbol_of(std::size_t code) const;
    std::optional<std::size_t> code_of(symbol_t s) const;
    // First code whose symbol is >= s (== distinct() when none).
    std::size_t lower_code(symbol_t s) const;

    std::size_t size_in_bits() const;
    void save(std::ostream& out) const;
    static alphabet_map load(std::istream& in);

private:
    symbol_t sigma_ = 0;
    std::size_t distinct_ = 0;
    std::variant<bit_vector, sparse_bit_vector> bits_;
};

class report_stream;

// Balanced wavelet tree over a sequence S[1, n] of symbols in [1, sigma].
//
// Present symbols are remapped to codes [0, u); a node covering codes
// [lo, hi] sends [lo, mid] left with mid = floor((lo + hi) / 2). Bitmaps of
// the same depth are concatenated into one bit_vector of length n, so
// node intervals are computed rather than stored. Elements of leaves that
// end above the last level keep their positions in deeper levels as unused
// zero bits, which keeps every level exactly n bits long.
class wavelet_tree {
public:
    wavelet_tree() = default;
    wavelet_tree(std::span<const symbol_t> seq, symbol_t sigma);

    std::size_t size() const { return n_; }
    symbol_t sigma() const { return alphabet_.sigma(); }
    std::size_t distinct() const { return alphabet_.distinct(); }
    std::size_t height() const { return levels_.size(); }

    symbol_t access(std::size_t i) const;
    std::size_t rank(symbol_t c, std::size_t i) const;
    std::optional<std::size_t> select(symbol_t c, std::size_t j) const;

    // Occurrences in S[xs, xe] of symbols in [ys, ye].
    std::size_t count(std::size_t xs, std::size_t xe, symbol_t ys, symbol_t ye) const;
    // Distinct symbols of S[xs, xe] within [ys, ye] with their frequencies,
    // in increasing symbol order.
    report_stream report_stream_of(std::size_t xs, std::size_t xe, symbol_t ys, symbol_t ye) const;
    std::vector<symbol_count> report(std::size_t xs, std::size_t xe, symbol_t ys, symbol_t ye) const;

    // Node navigation, used by the range algorithms.
    wt_node root() const;
    wt_node left(const wt_node& v) const;
    wt_node right(const wt_node& v) const;
    // Zeros among the first i positions of node v (0 <= i <= v.size).
    std::size_t zeros(const wt_node& v, std::size_t i) const;
    // Local ranges of the two children for a local range `r` of v.
    std::pair<interval, interval> split(const wt_node& v, const interval& r) const;
    bool bit(const wt_node& v, std::size_t i) const;
    symbol_t access_from(const wt_node& v, std::size_t i) const;
    std::size_t count_from(const wt_node& v, const interval& r, std::size_t code_lo, std::size_t code_hi) const;

    const alphabet_map& alphabet() const { return alphabet_; }
    symbol_t symbol_of(std::size_t code) const { return alphabet_.symbol_of(code); }
    // Code range of present symbols within [ys, ye]; empty when none.
    std::optional<std::pair<std::size_t, std::size_t>> code_range(symbol_t ys, symbol_t ye) const;

    const std::vector<bit_vector>& levels() const { return levels_; }
    std::size_t level_bits() const;
    std::size_t aux_bits() const;

    void save(std::ostream& out) const;
    static wavelet_tree load(std::istream& in);

private:
    std::size_t n_ = 0;
    alphabet_map alphabet_;
    std::vector<bit_vector> levels_;
};

// Caller-driven iteration over the output of wavelet_tree::report. Each
// call to next() resumes the depth-first traversal where it stopped.
class report_stream {
public:
    std::optional<symbol_count> next();

private:
    friend class wavelet_tree;
    struct frame {
        wt_node node;
        interval range;
    };
    report_stream(const wavelet_tree* wt, std::size_t code_lo, std::size_t code_hi) : wt_(wt), code_lo_(code_lo), code_hi_(code_hi) {}

    const wavelet_tree* wt_ = nullptr;
    std::size_t code_lo_ = 0, code_hi_ = 0;
    std::vector<frame> stack_;
};

}  // namespace wvx
