#include "wvx/hier_index.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include "wvx/range_ops.hpp"
#include "wvx/serialize.hpp"

namespace wvx {

unit_mask::unit_mask(const paren_tree& tree, bit_vector marks) : marks_(std::move(marks)) {
    if (marks_.size() != tree.size()) throw std::invalid_argument("unit mask length differs from the tree");
    std::vector<bool> sub;
    for (std::size_t q = 1; q <= marks_.size(); ++q) {
        if (!marks_.access(q)) continue;
        if (tree.is_open(q) && !marks_.access(tree.find_close(q)))
            throw std::invalid_argument("unit mask marks an open parenthesis without its close");
        sub.push_back(tree.is_open(q));
    }
    marked_ = paren_tree(bit_vector(sub));
}

std::optional<std::size_t> unit_mask::lowest_marked(std::size_t j) const {
    std::size_t r = marks_.rank1(j);
    if (r == 0) return std::nullopt;
    if (!marked_.is_open(r)) {
        auto up = marked_.enclosing(r);
        if (!up) return std::nullopt;
        r = *up;
    }
    return marks_.select1(r);
}

hier_index::hier_index(const xml_layout& layout) {
    const std::size_t len = layout.parens.size();
    if (len == 0) throw std::invalid_argument("hier_index: empty tree");
    std::map<std::string, std::size_t> ids;
    for (auto& name : layout.tags) ids.emplace(name, 0);
    for (auto& [name, id] : ids) {
        names_.push_back(name);
        id = names_.size();
    }
    const std::size_t tau = names_.size();

    tree_ = paren_tree(bit_vector(layout.parens));
    if (tree_.leaves() != layout.leaf_text.size()) throw std::invalid_argument("hier_index: leaf/text count mismatch");

    std::vector<symbol_t> tag_ids(len);
    std::vector<std::vector<bool>> per_tag(tau);
    std::vector<std::size_t> open_count(tau, 0);
    nests_.assign(tau, false);
    for (std::size_t q = 0; q < len; ++q) {
        const std::size_t t = ids.at(layout.tags[q]);
        tag_ids[q] = t;
        per_tag[t - 1].push_back(layout.parens[q]);
        if (layout.parens[q]) {
            if (open_count[t - 1] > 0) nests_[t - 1] = true;
            ++open_count[t - 1];
        } else {
            --open_count[t - 1];
        }
    }
    tag_seq_ = wavelet_tree(tag_ids, tau);
    for (auto& bits : per_tag) tag_trees_.emplace_back(bit_vector(bits));

    std::vector<bool> empty(layout.leaf_text.size());
    for (std::size_t i = 0; i < empty.size(); ++i) empty[i] = layout.leaf_text[i].empty();
    empty_leaf_ = bit_vector(empty);
    docs_ = doc_index(layout.leaf_text);
}

std::optional<std::size_t> hier_index::tag_id(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin()) + 1;
}

void hier_index::check_tag(std::size_t t) const {
    if (t == 0 || t > names_.size()) throw std::out_of_range("no tag with id " + std::to_string(t));
}

std::optional<std::size_t> hier_index::expand_tag(std::size_t t, std::size_t i) const {
    check_tag(t);
    if (i == 0 || i > leaves()) throw std::out_of_range("no leaf " + std::to_string(i));
    const std::size_t j = *tree_.select_leaf(i);
    std::size_t r = tag_seq_.rank(t, j);
    if (r == 0) return std::nullopt;
    const auto& pt = tag_trees_[t - 1];
    if (!pt.is_open(r)) {
        auto up = pt.enclosing(r);
        if (!up) return std::nullopt;
        r = *up;
    }
    return tag_seq_.select(t, r);
}

interval hier_index::leaf_range(std::size_t p) const {
    if (p == 0 || p > tree_.size()) throw std::out_of_range("node position outside P");
    if (!tree_.is_open(p)) throw std::invalid_argument("leaf_range: position " + std::to_string(p) + " is a close");
    auto [lo, hi] = tree_.leaf_span(p);
    return {lo, hi};
}

std::size_t hier_index::hdfreq(std::string_view q, std::size_t p) const {
    auto r = docs_.pattern_search(q);
    if (r.empty()) return 0;
    auto lr = leaf_range(p);
    return docs_.doc_array().count(r.lo, r.hi, lr.lo, lr.hi);
}

std::optional<std::size_t> hier_index::next_tagged_after(std::size_t t, std::size_t j) const {
    const auto& bits = tag_trees_[t - 1].bits();
    const std::size_t opens = bits.rank1(tag_seq_.rank(t, j));
    auto r = bits.select1(opens + 1);
    if (!r) return std::nullopt;
    return tag_seq_.select(t, *r);
}

std::vector<unit_hit> hier_index::hdlist(std::size_t t, std::string_view q, std::size_t dmin,
                                         std::size_t dmax) const {
    check_tag(t);
    std::vector<unit_hit> out;
    auto r = docs_.pattern_search(q);
    const std::size_t m = leaves();
    dmax = std::min(dmax, m);
    if (r.empty() || dmin > dmax) return out;

    std::vector<std::size_t> units;
    rnv_finger finger(docs_.doc_array(), r.lo, r.hi);
    std::size_t x = std::max<std::size_t>(dmin, 1);
    while (x <= dmax) {
        auto hit = finger.seek(x);
        if (!hit || hit->symbol > dmax) break;
        const std::size_t d = hit->symbol;
        const std::size_t j = *tree_.select_leaf(d);
        auto next = next_tagged_after(t, j);
        const std::size_t next_leaf = next ? tree_.rank_leaf(*next - 1) + 1 : m + 1;
        if (auto p = expand_tag(t, d)) {
            units.push_back(*p);
            x = leaf_range(*p).hi + 1;
            // A nested unit of the same tag owns its own leaves.
            if (next && *next < tree_.find_close(*p)) x = std::min(x, next_leaf);
        } else {
            x = next_leaf;
        }
    }
    std::sort(units.begin(), units.end());
    units.erase(std::unique(units.begin(), units.end()), units.end());
    for (auto p : units) {
        auto lr = leaf_range(p);
        out.push_back({p, docs_.doc_array().count(r.lo, r.hi, lr.lo, lr.hi)});
    }
    return out;
}

std::vector<unit_pair> hier_index::hdint(std::size_t t, std::string_view q1, std::string_view q2, std::size_t dmin,
                                         std::size_t dmax) const {
    check_tag(t);
    std::vector<unit_pair> out;
    const std::size_t m = leaves();
    dmin = std::max<std::size_t>(dmin, 1);
    dmax = std::min(dmax, m);
    if (dmin > dmax) return out;

    if (auto p = expand_tag(t, dmin)) dmin = leaf_range(*p).lo;
    if (auto p = expand_tag(t, dmax)) dmax = leaf_range(*p).hi;

    if (tag_nests(t)) {
        // Units of this tag contain one another; the boundary test below
        // assumes disjoint units, so intersect the two listings instead.
        auto a = hdlist(t, q1, dmin, dmax), b = hdlist(t, q2, dmin, dmax);
        std::size_t k = 0;
        for (auto& h : a) {
            while (k < b.size() && b[k].node < h.node) ++k;
            if (k < b.size() && b[k].node == h.node) out.push_back({h.node, h.freq, b[k].freq});
        }
        return out;
    }

    const interval r1 = docs_.pattern_search(q1), r2 = docs_.pattern_search(q2);
    if (r1.empty() || r2.empty()) return out;

    const wavelet_tree& da = docs_.doc_array();
    std::function<void(const wt_node&, interval, interval, std::size_t, std::size_t)> walk =
        [&](const wt_node& v, interval a, interval b, std::size_t lo, std::size_t hi) {
            detail::note_visit();
            if (a.empty() || b.empty()) return;
            lo = std::max<std::size_t>(lo, da.symbol_of(v.lo));
            hi = std::min<std::size_t>(hi, da.symbol_of(v.hi));
            if (lo > hi) return;
            if (v.is_leaf()) {
                if (auto p = expand_tag(t, da.symbol_of(v.lo))) out.push_back({*p, a.length(), b.length()});
                return;
            }
            auto [al, ar] = da.split(v, a);
            auto [bl, br] = da.split(v, b);
            const std::size_t left_hi = da.symbol_of(v.mid()), right_lo = da.symbol_of(v.mid() + 1);
            std::optional<std::size_t> unit;
            interval span;
            std::size_t f1 = 0, f2 = 0;
            if (lo <= left_hi && right_lo <= hi) {
                auto pl = expand_tag(t, left_hi), pr = expand_tag(t, right_lo);
                if (pl && pr && *pl == *pr) {
                    unit = pl;
                    span = leaf_range(*pl);
                    auto codes = da.code_range(span.lo, span.hi);
                    f1 = da.count_from(v, a, codes->first, codes->second);
                    f2 = da.count_from(v, b, codes->first, codes->second);
                }
            }
            walk(da.left(v), al, bl, lo, unit ? std::min(hi, span.lo - 1) : hi);
            if (unit && f1 > 0 && f2 > 0) out.push_back({*unit, f1, f2});
            walk(da.right(v), ar, br, unit ? std::max(lo, span.hi + 1) : lo, hi);
        };
    walk(da.root(), r1, r2, dmin, dmax);
    return out;
}

unit_mask hier_index::mask_for_tag(std::size_t t) const {
    check_tag(t);
    bit_vector_builder b(tree_.size());
    for (std::size_t k = 1, c = tag_seq_.rank(t, tree_.size()); k <= c; ++k) b.set(*tag_seq_.select(t, k));
    return unit_mask(tree_, std::move(b).build());
}

unit_mask hier_index::mask_for_nodes(const std::vector<std::size_t>& opens) const {
    bit_vector_builder b(tree_.size());
    for (auto p : opens) {
        if (p == 0 || p > tree_.size() || !tree_.is_open(p)) throw std::invalid_argument("mask node is not an open");
        b.set(p);
        b.set(tree_.find_close(p));
    }
    return unit_mask(tree_, std::move(b).build());
}

std::optional<interval> hier_index::expand_marked(const unit_mask& mask, std::size_t i) const {
    if (i == 0 || i > leaves()) throw std::out_of_range("no leaf " + std::to_string(i));
    auto p = mask.lowest_marked(*tree_.select_leaf(i));
    if (!p) return std::nullopt;
    return leaf_range(*p);
}

bit_vector hier_index::rebuild_tag_bits(std::size_t t) const {
    check_tag(t);
    std::vector<bool> bits;
    for (std::size_t q = 1; q <= tree_.size(); ++q)
        if (tag_seq_.access(q) == t) bits.push_back(tree_.is_open(q));
    return bit_vector(bits);
}

std::size_t hier_index::size_in_bits() const {
    std::size_t bits = tree_.size_in_bits() + tag_seq_.level_bits() + tag_seq_.aux_bits() + empty_leaf_.payload_bits();
    for (auto& pt : tag_trees_) bits += pt.size_in_bits();
    return bits;
}

void hier_index::save(std::ostream& out, bool store_text) const {
    io::put_magic(out, "WHIX");
    io::put_u64(out, names_.size());
    for (auto& n : names_) io::put_bytes(out, n);
    tree_.bits().save(out);
    tag_seq_.save(out);
    for (auto& pt : tag_trees_) pt.bits().save(out);
    empty_leaf_.save(out);
    docs_.save(out, store_text);
}

hier_index hier_index::load(std::istream& in) {
    io::expect_magic(in, "WHIX");
    hier_index h;
    const auto tau = io::get_u64(in);
    for (std::uint64_t t = 0; t < tau; ++t) h.names_.push_back(io::get_bytes(in));
    if (!std::is_sorted(h.names_.begin(), h.names_.end())) throw io::format_error("hier index: tag names unsorted");
    try {
        h.tree_ = paren_tree(bit_vector::load(in));
        h.tag_seq_ = wavelet_tree::load(in);
        for (std::uint64_t t = 0; t < tau; ++t) h.tag_trees_.emplace_back(bit_vector::load(in));
    } catch (const std::invalid_argument& e) {
        throw io::format_error(std::string("hier index: ") + e.what());
    }
    h.empty_leaf_ = bit_vector::load(in);
    h.docs_ = doc_index::load(in);
    if (h.tag_seq_.size() != h.tree_.size() || h.tag_seq_.sigma() != tau || h.empty_leaf_.size() != h.tree_.leaves() ||
        h.docs_.docs() != h.tree_.leaves())
        throw io::format_error("hier index: inconsistent section sizes");
    h.nests_.assign(tau, false);
    for (std::size_t t = 1; t <= tau; ++t) {
        const auto& pt = h.tag_trees_[t - 1];
        if (pt.size() != h.tag_seq_.rank(t, h.tree_.size())) throw io::format_error("hier index: P_t length mismatch");
        for (std::size_t r = 1; r <= pt.size() && !h.nests_[t - 1]; ++r)
            if (pt.is_open(r) && pt.excess(r) > 1) h.nests_[t - 1] = true;
    }
    return h;
}

}  // namespace wvx
