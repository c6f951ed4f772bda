#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wvx/wavelet_tree.hpp"

namespace wvx {

struct quantile_result {
    symbol_t symbol;
    std::size_t freq;  // occurrences of `symbol` in the whole query range
    friend bool operator==(const quantile_result&, const quantile_result&) = default;
};

struct next_value {
    symbol_t symbol;
    std::size_t freq;
    std::size_t rank;  // 1-based position of the first copy in the sorted range
    friend bool operator==(const next_value&, const next_value&) = default;
};

struct rint_hit {
    symbol_t symbol;
    std::vector<std::size_t> freqs;  // one slot per input range, 0 where absent
    friend bool operator==(const rint_hit&, const rint_hit&) = default;
};

inline constexpr symbol_t kMaxSymbol = std::numeric_limits<symbol_t>::max();

// k-th smallest value of S[i, j] and its frequency there.
quantile_result rqq(const wavelet_tree& wt, std::size_t i, std::size_t j, std::size_t k);

// Smallest value >= x in S[i, j]; absent when none exists or i > j.
std::optional<next_value> rnv(const wavelet_tree& wt, std::size_t i, std::size_t j, symbol_t x);

// Symbols within [ys, ye] that occur in at least `threshold` of the ranges,
// in increasing order. A branch is dropped once more than k - threshold
// ranges have become empty in it. Empty input ranges are allowed and keep
// their frequency slot.
void rint(const wavelet_tree& wt, std::span<const interval> ranges, std::size_t threshold, symbol_t ys, symbol_t ye,
          const std::function<void(const rint_hit&)>& sink);
std::vector<rint_hit> rint(const wavelet_tree& wt, std::span<const interval> ranges, std::size_t threshold,
                           symbol_t ys = 1, symbol_t ye = kMaxSymbol);

// Two-range intersection by alternating fingered next-value probes.
std::vector<symbol_t> rint_via_rnv(const wavelet_tree& wt, interval a, interval b);

// Distinct values at sorted positions k..k2 of S[i, j], increasing, with
// their multiplicity inside that window.
std::vector<symbol_count> mrqq(const wavelet_tree& wt, std::size_t i, std::size_t j, std::size_t k, std::size_t k2);

// Repeated range quantiles over a fixed range with non-decreasing k. Each
// call restarts from the deepest node of the previous path that still
// covers rank k instead of from the root.
class quantile_finger {
public:
    quantile_finger(const wavelet_tree& wt, std::size_t i, std::size_t j);

    quantile_result seek(std::size_t k);
    std::size_t range_size() const { return range_.length(); }
    std::size_t last_rank() const { return last_k_; }

private:
    struct frame {
        wt_node node;
        interval range;
        std::size_t skipped;  // values of the range sorted before this node
        std::size_t bound;    // largest k whose path passes through this node
    };
    const wavelet_tree* wt_;
    interval range_;
    std::size_t last_k_ = 0;
    std::vector<frame> path_;
};

// Repeated range next-value queries over a fixed range with strictly
// increasing x. Each call climbs from the previous answer's leaf to the
// lowest ancestor whose codes contain x and resumes the search there.
class rnv_finger {
public:
    rnv_finger(const wavelet_tree& wt, std::size_t i, std::size_t j);

    std::optional<next_value> seek(symbol_t x);
    bool exhausted() const { return exhausted_; }

private:
    struct frame {
        wt_node node;
        interval range;
        std::size_t smaller;  // values of the range sorted before this node
    };
    std::optional<next_value> descend(std::size_t code);

    const wavelet_tree* wt_;
    interval range_;
    std::optional<symbol_t> last_x_;
    bool exhausted_ = false;
    std::vector<frame> path_;
};

}  // namespace wvx
