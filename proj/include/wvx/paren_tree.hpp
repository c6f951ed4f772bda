#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wvx/bit_vector.hpp"

namespace wvx {

// Balanced parentheses (1 = open) with excess-based navigation. A node is
// the 1-based position of its open parenthesis. The string may be a forest.
//
// Excess E(x) = #open - #close in P[1, x], E(0) = 0. Minimum excess is kept
// per 512-bit block with a segment tree on top, so forward and backward
// searches scan at most two blocks plus O(log) tree steps.
class paren_tree {
public:
    paren_tree() = default;
    explicit paren_tree(bit_vector bits);

    std::size_t size() const { return bits_.size(); }
    std::size_t nodes() const { return bits_.ones(); }
    std::size_t leaves() const { return leaf_.ones(); }
    bool is_open(std::size_t p) const { return bits_.access(p); }
    const bit_vector& bits() const { return bits_; }

    long long excess(std::size_t x) const;
    std::size_t find_close(std::size_t p) const;
    std::size_t find_open(std::size_t r) const;
    // Parent of the node opened at p; absent for a top-level node.
    std::optional<std::size_t> enclose(std::size_t p) const;
    // Innermost node whose parentheses strictly surround position x.
    std::optional<std::size_t> enclosing(std::size_t x) const;
    std::size_t subtree_size(std::size_t p) const { return (find_close(p) - p + 1) / 2; }

    // Leaves are "()" pairs; rank_leaf counts leaves opened in P[1, p].
    std::size_t rank_leaf(std::size_t p) const { return leaf_.rank1(p); }
    std::optional<std::size_t> select_leaf(std::size_t i) const { return leaf_.select1(i); }
    bool is_leaf(std::size_t p) const { return leaf_.access(p); }
    // 1-based leaf numbers under the node opened at p.
    std::pair<std::size_t, std::size_t> leaf_span(std::size_t p) const;

    std::size_t size_in_bits() const;

    // Smallest q > p with E(q) <= E(p) + d, for d < 0.
    std::optional<std::size_t> fwd_search(std::size_t p, long long d) const;
    // Largest q < p (q >= 0) with E(q) <= E(p) + d, assuming E stays above
    // that target on (q, p).
    std::optional<std::size_t> bwd_search(std::size_t p, long long d) const;

private:
    static constexpr std::size_t kBlock = 512;
    std::size_t block_of(std::size_t q) const { return (q - 1) / kBlock; }
    std::optional<std::size_t> first_block_at_most(std::size_t from, long long target) const;
    std::optional<std::size_t> last_block_at_most(std::size_t before, long long target) const;

    bit_vector bits_;
    bit_vector leaf_;
    std::size_t tree_size_ = 0;        // power of two >= number of blocks
    std::vector<long long> min_tree_;  // 1-based heap layout
};

}  // namespace wvx
