#include "wvx/range_ops.hpp"

#include <stdexcept>
#include <string>

namespace wvx {

namespace {

void check_range(const wavelet_tree& wt, std::size_t i, std::size_t j, const char* what) {
    if (i == 0 || i > j || j > wt.size())
        throw std::out_of_range(std::string(what) + ": range [" + std::to_string(i) + "," + std::to_string(j) +
                                "] outside [1," + std::to_string(wt.size()) + "]");
}

std::optional<next_value> rnv_node(const wavelet_tree& wt, const wt_node& v, const interval& r, std::size_t smaller,
                                   std::size_t code) {
    detail::note_visit();
    if (r.empty()) return std::nullopt;
    if (v.is_leaf()) return next_value{wt.symbol_of(v.lo), r.length(), smaller + 1};
    auto [rl, rr] = wt.split(v, r);
    const std::size_t nl = rl.length();
    if (code > v.mid()) return rnv_node(wt, wt.right(v), rr, smaller + nl, code);
    if (auto hit = rnv_node(wt, wt.left(v), rl, smaller, code)) return hit;
    const wt_node rc = wt.right(v);
    return rnv_node(wt, rc, rr, smaller + nl, rc.lo);
}

struct rint_context {
    const wavelet_tree& wt;
    std::size_t k;
    std::size_t threshold;
    std::size_t code_lo, code_hi;
    const std::function<void(const rint_hit&)>& sink;
};

void rint_node(const rint_context& ctx, const wt_node& v, const std::vector<interval>& ranges, std::size_t empties) {
    detail::note_visit();
    if (empties > ctx.k - ctx.threshold) return;
    if (v.hi < ctx.code_lo || v.lo > ctx.code_hi) return;
    if (v.is_leaf()) {
        rint_hit hit{ctx.wt.symbol_of(v.lo), std::vector<std::size_t>(ctx.k)};
        for (std::size_t r = 0; r < ctx.k; ++r) hit.freqs[r] = ranges[r].length();
        ctx.sink(hit);
        return;
    }
    std::vector<interval> left(ctx.k), right(ctx.k);
    std::size_t empty_left = 0, empty_right = 0;
    for (std::size_t r = 0; r < ctx.k; ++r) {
        std::tie(left[r], right[r]) = ctx.wt.split(v, ranges[r]);
        empty_left += left[r].empty();
        empty_right += right[r].empty();
    }
    rint_node(ctx, ctx.wt.left(v), left, empty_left);
    rint_node(ctx, ctx.wt.right(v), right, empty_right);
}

void mrqq_node(const wavelet_tree& wt, const wt_node& v, const interval& r, std::size_t k, std::size_t k2,
               std::vector<symbol_count>& out) {
    detail::note_visit();
    if (v.is_leaf()) {
        out.push_back({wt.symbol_of(v.lo), k2 - k + 1});
        return;
    }
    auto [rl, rr] = wt.split(v, r);
    const std::size_t nl = rl.length();
    if (k <= nl) mrqq_node(wt, wt.left(v), rl, k, std::min(nl, k2), out);
    if (k2 > nl) mrqq_node(wt, wt.right(v), rr, k > nl ? k - nl : 1, k2 - nl, out);
}

}  // namespace

quantile_result rqq(const wavelet_tree& wt, std::size_t i, std::size_t j, std::size_t k) {
    check_range(wt, i, j, "rqq");
    if (k == 0 || k > j - i + 1) throw std::out_of_range("rqq: k=" + std::to_string(k) + " outside the range size");
    wt_node v = wt.root();
    interval r{i, j};
    while (!v.is_leaf()) {
        detail::note_visit();
        auto [rl, rr] = wt.split(v, r);
        const std::size_t nl = rl.length();
        if (k <= nl) {
            v = wt.left(v);
            r = rl;
        } else {
            k -= nl;
            v = wt.right(v);
            r = rr;
        }
    }
    detail::note_visit();
    return {wt.symbol_of(v.lo), r.length()};
}

std::optional<next_value> rnv(const wavelet_tree& wt, std::size_t i, std::size_t j, symbol_t x) {
    if (i > j || wt.distinct() == 0) return std::nullopt;
    check_range(wt, i, j, "rnv");
    const std::size_t code = wt.alphabet().lower_code(x);
    if (code >= wt.distinct()) return std::nullopt;
    return rnv_node(wt, wt.root(), interval{i, j}, 0, code);
}

void rint(const wavelet_tree& wt, std::span<const interval> ranges, std::size_t threshold, symbol_t ys, symbol_t ye,
          const std::function<void(const rint_hit&)>& sink) {
    const std::size_t k = ranges.size();
    if (k == 0) throw std::invalid_argument("rint: no ranges");
    if (threshold == 0 || threshold > k) throw std::invalid_argument("rint: threshold must be in [1,k]");
    std::size_t empties = 0;
    for (const auto& r : ranges) {
        if (r.empty()) ++empties;
        else if (r.lo == 0 || r.hi > wt.size()) throw std::out_of_range("rint: range outside [1,n]");
    }
    auto codes = wt.code_range(ys, ye);
    if (!codes) return;
    rint_context ctx{wt, k, threshold, codes->first, codes->second, sink};
    rint_node(ctx, wt.root(), std::vector<interval>(ranges.begin(), ranges.end()), empties);
}

std::vector<rint_hit> rint(const wavelet_tree& wt, std::span<const interval> ranges, std::size_t threshold,
                           symbol_t ys, symbol_t ye) {
    std::vector<rint_hit> out;
    rint(wt, ranges, threshold, ys, ye, [&](const rint_hit& h) { out.push_back(h); });
    return out;
}

std::vector<symbol_t> rint_via_rnv(const wavelet_tree& wt, interval a, interval b) {
    std::vector<symbol_t> out;
    if (a.empty() || b.empty() || wt.distinct() == 0) return out;
    rnv_finger first(wt, a.lo, a.hi), second(wt, b.lo, b.hi);
    symbol_t x = 1;
    while (true) {
        auto y1 = first.seek(x);
        if (!y1) break;
        auto y2 = second.seek(y1->symbol);
        if (!y2) break;
        if (y2->symbol == y1->symbol) {
            out.push_back(y1->symbol);
            x = y1->symbol + 1;
        } else {
            x = y2->symbol;
        }
    }
    return out;
}

std::vector<symbol_count> mrqq(const wavelet_tree& wt, std::size_t i, std::size_t j, std::size_t k, std::size_t k2) {
    check_range(wt, i, j, "mrqq");
    if (k == 0 || k > k2 || k2 > j - i + 1) throw std::out_of_range("mrqq: window outside the range size");
    std::vector<symbol_count> out;
    mrqq_node(wt, wt.root(), interval{i, j}, k, k2, out);
    return out;
}

// ---------------------------------------------------------------------------

quantile_finger::quantile_finger(const wavelet_tree& wt, std::size_t i, std::size_t j) : wt_(&wt), range_{i, j} {
    check_range(wt, i, j, "quantile_finger");
}

quantile_result quantile_finger::seek(std::size_t k) {
    if (k == 0 || k > range_.length()) throw std::out_of_range("quantile_finger: k=" + std::to_string(k));
    if (k < last_k_) throw std::invalid_argument("quantile_finger: k must not decrease");
    last_k_ = k;
    if (path_.empty()) path_.push_back({wt_->root(), range_, 0, range_.length()});
    while (path_.back().bound < k) path_.pop_back();

    while (true) {
        const frame f = path_.back();
        detail::note_visit();
        if (f.node.is_leaf()) return {wt_->symbol_of(f.node.lo), f.range.length()};
        auto [rl, rr] = wt_->split(f.node, f.range);
        const std::size_t nl = rl.length();
        if (k - f.skipped <= nl) path_.push_back({wt_->left(f.node), rl, f.skipped, f.skipped + nl});
        else path_.push_back({wt_->right(f.node), rr, f.skipped + nl, f.bound});
    }
}

// ---------------------------------------------------------------------------

rnv_finger::rnv_finger(const wavelet_tree& wt, std::size_t i, std::size_t j) : wt_(&wt), range_{i, j} {
    if (!range_.empty()) check_range(wt, i, j, "rnv_finger");
    exhausted_ = range_.empty() || wt.distinct() == 0;
}

std::optional<next_value> rnv_finger::seek(symbol_t x) {
    if (last_x_ && x <= *last_x_) throw std::invalid_argument("rnv_finger: x must increase between calls");
    last_x_ = x;
    if (exhausted_) return std::nullopt;
    const std::size_t code = wt_->alphabet().lower_code(x);
    if (code >= wt_->distinct()) {
        exhausted_ = true;
        path_.clear();
        return std::nullopt;
    }
    if (path_.empty()) path_.push_back({wt_->root(), range_, 0});
    while (!(path_.back().node.lo <= code && code <= path_.back().node.hi)) path_.pop_back();
    auto hit = descend(code);
    if (!hit) {
        exhausted_ = true;
        path_.clear();
    }
    return hit;
}

// Depth-first search from path_.back() for the first non-empty leaf with a
// code >= `code`, backtracking through the stored ancestors when a subtree
// runs dry.
std::optional<next_value> rnv_finger::descend(std::size_t code) {
    bool backtracking = false;
    while (!path_.empty()) {
        if (backtracking) {
            const frame child = path_.back();
            path_.pop_back();
            if (path_.empty()) return std::nullopt;
            const frame& parent = path_.back();
            if (child.node.lo != parent.node.lo) continue;  // came from the right child
            auto [rl, rr] = wt_->split(parent.node, parent.range);
            path_.push_back({wt_->right(parent.node), rr, parent.smaller + rl.length()});
            backtracking = false;
            continue;
        }
        const frame f = path_.back();
        detail::note_visit();
        if (f.range.empty()) {
            backtracking = true;
            continue;
        }
        if (f.node.is_leaf()) return next_value{wt_->symbol_of(f.node.lo), f.range.length(), f.smaller + 1};
        auto [rl, rr] = wt_->split(f.node, f.range);
        if (code > f.node.mid()) path_.push_back({wt_->right(f.node), rr, f.smaller + rl.length()});
        else path_.push_back({wt_->left(f.node), rl, f.smaller});
    }
    return std::nullopt;
}

}  // namespace wvx
