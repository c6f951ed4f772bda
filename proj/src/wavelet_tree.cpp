#include "wvx/wavelet_tree.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "wvx/serialize.hpp"

namespace wvx {

// ---------------------------------------------------------------------------
// alphabet_map

alphabet_map::alphabet_map(std::span<const symbol_t> present, symbol_t sigma) : sigma_(sigma), distinct_(present.size()) {
    if (2 * distinct_ < sigma_) {
        std::vector<std::size_t> pos(present.begin(), present.end());
        bits_ = sparse_bit_vector(pos, sigma_);
    } else {
        bit_vector_builder b(sigma_);
        for (auto s : present) b.set(s);
        bits_ = std::move(b).build();
    }
}

std::size_t alphabet_map::rank(symbol_t s) const {
    if (s > sigma_) s = sigma_;
    return std::visit([&](const auto& bv) { return bv.rank1(s); }, bits_);
}

symbol_t alphabet_map::symbol_of(std::size_t code) const {
    auto s = std::visit([&](const auto& bv) { return bv.select1(code + 1); }, bits_);
    if (!s) throw std::out_of_range("alphabet_map: code " + std::to_string(code));
    return *s;
}

std::optional<std::size_t> alphabet_map::code_of(symbol_t s) const {
    if (s == 0 || s > sigma_) return std::nullopt;
    const bool present = std::visit([&](const auto& bv) { return bv.access(s); }, bits_);
    if (!present) return std::nullopt;
    return rank(s) - 1;
}

std::size_t alphabet_map::lower_code(symbol_t s) const {
    if (s == 0) return 0;
    if (s > sigma_) return distinct_;
    return rank(s - 1);
}

std::size_t alphabet_map::size_in_bits() const {
    return std::visit(
        [](const auto& bv) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(bv)>, bit_vector>)
                return bv.payload_bits() + bv.aux_bits();
            else
                return bv.size_in_bits();
        },
        bits_);
}

void alphabet_map::save(std::ostream& out) const {
    io::put_u64(out, is_sparse() ? 1 : 0);
    io::put_u64(out, sigma_);
    io::put_u64(out, distinct_);
    std::visit([&](const auto& bv) { bv.save(out); }, bits_);
}

alphabet_map alphabet_map::load(std::istream& in) {
    alphabet_map a;
    const auto sparse = io::get_u64(in);
    a.sigma_ = io::get_u64(in);
    a.distinct_ = io::get_u64(in);
    if (sparse) a.bits_ = sparse_bit_vector::load(in);
    else a.bits_ = bit_vector::load(in);
    const std::size_t ones = std::visit([](const auto& bv) { return bv.ones(); }, a.bits_);
    if (ones != a.distinct_) throw io::format_error("alphabet_map: distinct count mismatch");
    return a;
}

// ---------------------------------------------------------------------------
// construction

wavelet_tree::wavelet_tree(std::span<const symbol_t> seq, symbol_t sigma) : n_(seq.size()) {
    std::vector<symbol_t> present;
    {
        std::vector<bool> seen;
        for (auto s : seq) {
            if (s == 0 || s > sigma)
                throw std::out_of_range("wavelet_tree: symbol " + std::to_string(s) + " outside [1," + std::to_string(sigma) + "]");
            if (seen.size() <= s) seen.resize(std::max<std::size_t>(s + 1, 2 * seen.size()), false);
            seen[s] = true;
        }
        for (std::size_t s = 1; s < seen.size(); ++s)
            if (seen[s]) present.push_back(s);
    }
    alphabet_ = alphabet_map(present, sigma);
    const std::size_t u = present.size();
    if (u <= 1) return;

    std::vector<std::size_t> cur(n_);
    for (std::size_t i = 0; i < n_; ++i)
        cur[i] = static_cast<std::size_t>(std::lower_bound(present.begin(), present.end(), seq[i]) - present.begin());

    const auto height = static_cast<std::size_t>(std::bit_width(u - 1));
    struct segment {
        std::size_t begin, size, lo, hi;
    };
    std::vector<segment> segs{{0, n_, 0, u - 1}};
    std::vector<std::size_t> next(n_);
    for (std::size_t d = 0; d < height; ++d) {
        bit_vector_builder bits(n_);
        std::vector<segment> children;
        for (const auto& s : segs) {
            if (s.lo == s.hi) {
                std::copy_n(cur.begin() + s.begin, s.size, next.begin() + s.begin);
                children.push_back(s);
                continue;
            }
            const std::size_t mid = s.lo + (s.hi - s.lo) / 2;
            std::size_t left_fill = s.begin;
            for (std::size_t k = s.begin; k < s.begin + s.size; ++k)
                if (cur[k] <= mid) ++left_fill;
            std::size_t l = s.begin, r = left_fill;
            for (std::size_t k = s.begin; k < s.begin + s.size; ++k) {
                if (cur[k] <= mid) {
                    next[l++] = cur[k];
                } else {
                    bits.set(k + 1);
                    next[r++] = cur[k];
                }
            }
            children.push_back({s.begin, left_fill - s.begin, s.lo, mid});
            children.push_back({left_fill, s.begin + s.size - left_fill, mid + 1, s.hi});
        }
        levels_.push_back(std::move(bits).build());
        segs = std::move(children);
        cur.swap(next);
    }
}

// ---------------------------------------------------------------------------
// navigation

wt_node wavelet_tree::root() const {
    if (distinct() == 0) throw std::logic_error("wavelet_tree: empty tree has no root");
    return wt_node{0, 0, n_, 0, distinct() - 1, 0};
}

std::size_t wavelet_tree::zeros(const wt_node& v, std::size_t i) const {
    return levels_[v.depth].rank0(v.begin + i) - v.zeros_before;
}

bool wavelet_tree::bit(const wt_node& v, std::size_t i) const { return levels_[v.depth].access(v.begin + i); }

wt_node wavelet_tree::left(const wt_node& v) const {
    wt_node c{v.depth + 1, v.begin, zeros(v, v.size), v.lo, v.mid(), 0};
    if (!c.is_leaf()) c.zeros_before = levels_[c.depth].rank0(c.begin);
    return c;
}

wt_node wavelet_tree::right(const wt_node& v) const {
    const std::size_t z = zeros(v, v.size);
    wt_node c{v.depth + 1, v.begin + z, v.size - z, v.mid() + 1, v.hi, 0};
    if (!c.is_leaf()) c.zeros_before = levels_[c.depth].rank0(c.begin);
    return c;
}

std::pair<interval, interval> wavelet_tree::split(const wt_node& v, const interval& r) const {
    if (r.empty()) return {interval{}, interval{}};
    const std::size_t zb = zeros(v, r.lo - 1);
    const std::size_t zu = zeros(v, r.hi);
    return {interval{zb + 1, zu}, interval{r.lo - zb, r.hi - zu}};
}

symbol_t wavelet_tree::access_from(const wt_node& start, std::size_t i) const {
    if (i == 0 || i > start.size) throw std::out_of_range("wavelet_tree::access: position " + std::to_string(i));
    wt_node v = start;
    while (!v.is_leaf()) {
        detail::note_visit();
        if (bit(v, i)) {
            i -= zeros(v, i);
            v = right(v);
        } else {
            i = zeros(v, i);
            v = left(v);
        }
    }
    detail::note_visit();
    return symbol_of(v.lo);
}

symbol_t wavelet_tree::access(std::size_t i) const {
    if (i == 0 || i > n_) throw std::out_of_range("wavelet_tree::access: position " + std::to_string(i));
    return access_from(root(), i);
}

std::size_t wavelet_tree::rank(symbol_t c, std::size_t i) const {
    if (i > n_) throw std::out_of_range("wavelet_tree::rank: position " + std::to_string(i));
    auto code = alphabet_.code_of(c);
    if (!code || i == 0) return 0;
    wt_node v = root();
    while (!v.is_leaf()) {
        detail::note_visit();
        if (*code <= v.mid()) {
            i = zeros(v, i);
            v = left(v);
        } else {
            i -= zeros(v, i);
            v = right(v);
        }
    }
    detail::note_visit();
    return i;
}

std::optional<std::size_t> wavelet_tree::select(symbol_t c, std::size_t j) const {
    auto code = alphabet_.code_of(c);
    if (!code || j == 0) return std::nullopt;
    std::vector<wt_node> path;
    wt_node v = root();
    while (!v.is_leaf()) {
        detail::note_visit();
        path.push_back(v);
        v = *code <= v.mid() ? left(v) : right(v);
    }
    detail::note_visit();
    if (j > v.size) return std::nullopt;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        const wt_node& p = *it;
        const bit_vector& level = levels_[p.depth];
        if (*code <= p.mid()) {
            j = *level.select0(p.zeros_before + j) - p.begin;
        } else {
            const std::size_t ones_before = p.begin - p.zeros_before;
            j = *level.select1(ones_before + j) - p.begin;
        }
    }
    return j;
}

std::optional<std::pair<std::size_t, std::size_t>> wavelet_tree::code_range(symbol_t ys, symbol_t ye) const {
    if (distinct() == 0 || ys > ye || ys > sigma() || ye == 0) return std::nullopt;
    const std::size_t lo = alphabet_.lower_code(ys);
    const std::size_t upto = alphabet_.rank(std::min(ye, sigma()));
    if (upto == 0 || lo > upto - 1) return std::nullopt;
    return std::pair{lo, upto - 1};
}

// ---------------------------------------------------------------------------
// range count / report

std::size_t wavelet_tree::count_from(const wt_node& v, const interval& r, std::size_t code_lo, std::size_t code_hi) const {
    detail::note_visit();
    if (r.empty() || v.hi < code_lo || v.lo > code_hi) return 0;
    if (code_lo <= v.lo && v.hi <= code_hi) return r.length();
    auto [rl, rr] = split(v, r);
    return count_from(left(v), rl, code_lo, code_hi) + count_from(right(v), rr, code_lo, code_hi);
}

std::size_t wavelet_tree::count(std::size_t xs, std::size_t xe, symbol_t ys, symbol_t ye) const {
    if (xs > xe) return 0;
    if (xs == 0 || xe > n_) throw std::out_of_range("wavelet_tree::count: position range outside [1,n]");
    auto codes = code_range(ys, ye);
    if (!codes) return 0;
    return count_from(root(), interval{xs, xe}, codes->first, codes->second);
}

report_stream wavelet_tree::report_stream_of(std::size_t xs, std::size_t xe, symbol_t ys, symbol_t ye) const {
    if (xs <= xe && (xs == 0 || xe > n_)) throw std::out_of_range("wavelet_tree::report: position range outside [1,n]");
    auto codes = code_range(ys, ye);
    if (!codes || xs > xe) return report_stream(this, 0, 0);
    report_stream s(this, codes->first, codes->second);
    s.stack_.push_back({root(), interval{xs, xe}});
    return s;
}

std::vector<symbol_count> wavelet_tree::report(std::size_t xs, std::size_t xe, symbol_t ys, symbol_t ye) const {
    std::vector<symbol_count> out;
    auto s = report_stream_of(xs, xe, ys, ye);
    while (auto hit = s.next()) out.push_back(*hit);
    return out;
}

std::optional<symbol_count> report_stream::next() {
    while (!stack_.empty()) {
        frame f = stack_.back();
        stack_.pop_back();
        detail::note_visit();
        const wt_node& v = f.node;
        if (f.range.empty() || v.hi < code_lo_ || v.lo > code_hi_) continue;
        if (v.is_leaf()) return symbol_count{wt_->symbol_of(v.lo), f.range.length()};
        auto [rl, rr] = wt_->split(v, f.range);
        stack_.push_back({wt_->right(v), rr});
        stack_.push_back({wt_->left(v), rl});
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// space and serialization

std::size_t wavelet_tree::level_bits() const {
    std::size_t total = 0;
    for (const auto& l : levels_) total += l.payload_bits();
    return total;
}

std::size_t wavelet_tree::aux_bits() const {
    std::size_t total = 0;
    for (const auto& l : levels_) total += l.aux_bits();
    return total;
}

void wavelet_tree::save(std::ostream& out) const {
    io::put_magic(out, "WVT1");
    io::put_u64(out, n_);
    io::put_u64(out, alphabet_.sigma());
    io::put_u64(out, alphabet_.distinct());
    io::put_u64(out, levels_.size());
    alphabet_.save(out);
    for (const auto& l : levels_) l.save(out);
}

wavelet_tree wavelet_tree::load(std::istream& in) {
    io::expect_magic(in, "WVT1");
    wavelet_tree wt;
    wt.n_ = io::get_u64(in);
    const auto sigma = io::get_u64(in);
    const auto u = io::get_u64(in);
    const auto height = io::get_u64(in);
    wt.alphabet_ = alphabet_map::load(in);
    if (wt.alphabet_.sigma() != sigma || wt.alphabet_.distinct() != u)
        throw io::format_error("wavelet_tree: header does not match alphabet");
    const std::size_t expected = u <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(u - 1));
    if (height != expected) throw io::format_error("wavelet_tree: bad height");
    for (std::size_t d = 0; d < height; ++d) {
        wt.levels_.push_back(bit_vector::load(in));
        if (wt.levels_.back().size() != wt.n_) throw io::format_error("wavelet_tree: level length mismatch");
    }
    return wt;
}

}  // namespace wvx
