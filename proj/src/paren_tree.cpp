#include "wvx/paren_tree.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace wvx {

namespace {
constexpr long long kInf = std::numeric_limits<long long>::max();

// First leaf index >= from whose value <= target, in a heap-ordered min tree.
std::optional<std::size_t> first_at_most(const std::vector<long long>& t, std::size_t node, std::size_t lo,
                                         std::size_t hi, std::size_t from, long long target) {
    if (hi <= from || t[node] > target) return std::nullopt;
    if (hi - lo == 1) return lo;
    const std::size_t mid = (lo + hi) / 2;
    if (auto r = first_at_most(t, 2 * node, lo, mid, from, target)) return r;
    return first_at_most(t, 2 * node + 1, mid, hi, from, target);
}

// Last leaf index < before whose value <= target.
std::optional<std::size_t> last_at_most(const std::vector<long long>& t, std::size_t node, std::size_t lo,
                                        std::size_t hi, std::size_t before, long long target) {
    if (lo >= before || t[node] > target) return std::nullopt;
    if (hi - lo == 1) return lo;
    const std::size_t mid = (lo + hi) / 2;
    if (auto r = last_at_most(t, 2 * node + 1, mid, hi, before, target)) return r;
    return last_at_most(t, 2 * node, lo, mid, before, target);
}
}  // namespace

paren_tree::paren_tree(bit_vector bits) : bits_(std::move(bits)) {
    const std::size_t n = bits_.size();
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    tree_size_ = 1;
    while (tree_size_ < blocks) tree_size_ *= 2;
    min_tree_.assign(2 * tree_size_, kInf);

    bit_vector_builder leaf(n);
    long long e = 0;
    for (std::size_t q = 1; q <= n; ++q) {
        const bool open = bits_.access(q);
        e += open ? 1 : -1;
        if (e < 0) throw std::invalid_argument("unbalanced parentheses: excess below zero at " + std::to_string(q));
        auto& slot = min_tree_[tree_size_ + block_of(q)];
        slot = std::min(slot, e);
        if (open && q < n && !bits_.access(q + 1)) leaf.set(q);
    }
    if (e != 0) throw std::invalid_argument("unbalanced parentheses: final excess " + std::to_string(e));
    leaf_ = std::move(leaf).build();
    for (std::size_t v = tree_size_ - 1; v >= 1; --v) min_tree_[v] = std::min(min_tree_[2 * v], min_tree_[2 * v + 1]);
}

long long paren_tree::excess(std::size_t x) const {
    return 2 * static_cast<long long>(bits_.rank1(x)) - static_cast<long long>(x);
}

std::optional<std::size_t> paren_tree::first_block_at_most(std::size_t from, long long target) const {
    if (min_tree_.empty()) return std::nullopt;
    return first_at_most(min_tree_, 1, 0, tree_size_, from, target);
}

std::optional<std::size_t> paren_tree::last_block_at_most(std::size_t before, long long target) const {
    if (min_tree_.empty()) return std::nullopt;
    return last_at_most(min_tree_, 1, 0, tree_size_, before, target);
}

std::optional<std::size_t> paren_tree::fwd_search(std::size_t p, long long d) const {
    const std::size_t n = size();
    long long e = excess(p);
    const long long target = e + d;
    const std::size_t block_end = p == 0 ? 0 : std::min(n, (block_of(p) + 1) * kBlock);
    for (std::size_t q = p + 1; q <= block_end; ++q) {
        e += bits_.access(q) ? 1 : -1;
        if (e <= target) return q;
    }
    auto b = first_block_at_most(p == 0 ? 0 : block_of(p) + 1, target);
    if (!b) return std::nullopt;
    const std::size_t start = *b * kBlock + 1;
    e = excess(start - 1);
    for (std::size_t q = start; q <= n; ++q) {
        e += bits_.access(q) ? 1 : -1;
        if (e <= target) return q;
    }
    return std::nullopt;
}

std::optional<std::size_t> paren_tree::bwd_search(std::size_t p, long long d) const {
    if (p == 0) return std::nullopt;
    long long e = excess(p);
    const long long target = e + d;
    const std::size_t block_start = block_of(p) * kBlock + 1;
    for (std::size_t q = p; q > block_start; --q) {
        e -= bits_.access(q) ? 1 : -1;  // now E(q-1)
        if (e <= target) return q - 1;
    }
    if (auto b = last_block_at_most(block_of(p), target)) {
        const std::size_t end = (*b + 1) * kBlock;
        e = excess(end);
        if (e <= target) return end;
        for (std::size_t q = end; q > *b * kBlock + 1; --q) {
            e -= bits_.access(q) ? 1 : -1;
            if (e <= target) return q - 1;
        }
    }
    if (target >= 0) return 0;
    return std::nullopt;
}

std::size_t paren_tree::find_close(std::size_t p) const {
    if (!is_open(p)) throw std::invalid_argument("find_close: position " + std::to_string(p) + " is not an open");
    return *fwd_search(p, -1);
}

std::size_t paren_tree::find_open(std::size_t r) const {
    if (is_open(r)) throw std::invalid_argument("find_open: position " + std::to_string(r) + " is not a close");
    return *bwd_search(r, 0) + 1;
}

std::optional<std::size_t> paren_tree::enclose(std::size_t p) const {
    if (!is_open(p)) throw std::invalid_argument("enclose: position " + std::to_string(p) + " is not an open");
    if (excess(p) < 2) return std::nullopt;
    return *bwd_search(p, -2) + 1;
}

std::optional<std::size_t> paren_tree::enclosing(std::size_t x) const {
    if (is_open(x)) return enclose(x);
    if (excess(x) < 1) return std::nullopt;
    return *bwd_search(x, -1) + 1;
}

std::pair<std::size_t, std::size_t> paren_tree::leaf_span(std::size_t p) const {
    return {rank_leaf(p - 1) + 1, rank_leaf(find_close(p))};
}

std::size_t paren_tree::size_in_bits() const {
    return bits_.payload_bits() + bits_.aux_bits() + leaf_.payload_bits() + leaf_.aux_bits() + 64 * min_tree_.size();
}

}  // namespace wvx
