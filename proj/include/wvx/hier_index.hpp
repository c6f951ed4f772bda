#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wvx/doc_index.hpp"
#include "wvx/paren_tree.hpp"
#include "wvx/wavelet_tree.hpp"
#include "wvx/xml.hpp"

namespace wvx {

struct unit_hit {
    std::size_t node;  // open position in P
    std::size_t freq;
    friend bool operator==(const unit_hit&, const unit_hit&) = default;
};

struct unit_pair {
    std::size_t node;
    std::size_t f1, f2;
    friend bool operator==(const unit_pair&, const unit_pair&) = default;
};

// Retrievable units given as a bitmap over P marking both parentheses of
// each chosen node. The marked parentheses, read in order, form a forest of
// their own, which is where the lowest marked ancestor is resolved.
class unit_mask {
public:
    unit_mask() = default;
    unit_mask(const paren_tree& tree, bit_vector marks);

    const bit_vector& marks() const { return marks_; }
    // Lowest marked node containing position j of P.
    std::optional<std::size_t> lowest_marked(std::size_t j) const;

private:
    bit_vector marks_;
    paren_tree marked_;
};

// XML collection whose leaves are the documents of a doc_index. P is the
// preorder parenthesis string, Tag the tag of every parenthesis and P_t the
// parentheses of the nodes tagged t alone.
class hier_index {
public:
    hier_index() = default;
    explicit hier_index(const xml_layout& layout);
    static hier_index from_xml(std::string_view xml) { return hier_index(parse_xml(xml)); }

    std::size_t nodes() const { return tree_.nodes(); }
    std::size_t leaves() const { return tree_.leaves(); }
    std::size_t tags() const { return names_.size(); }
    const std::string& tag_name(std::size_t t) const { return names_.at(t - 1); }
    std::optional<std::size_t> tag_id(std::string_view name) const;
    std::size_t tag_of(std::size_t p) const { return tag_seq_.access(p); }
    bool tag_nests(std::size_t t) const { return nests_.at(t - 1); }
    bool leaf_is_empty(std::size_t i) const { return empty_leaf_.access(i); }

    const paren_tree& tree() const { return tree_; }
    const wavelet_tree& tag_seq() const { return tag_seq_; }
    const paren_tree& tag_tree(std::size_t t) const { return tag_trees_.at(t - 1); }
    const doc_index& text() const { return docs_; }
    doc_index& text() { return docs_; }

    // Open position of the lowest ancestor-or-self of leaf i tagged t.
    std::optional<std::size_t> expand_tag(std::size_t t, std::size_t i) const;
    interval leaf_range(std::size_t p) const;
    std::size_t hdfreq(std::string_view q, std::size_t p) const;
    // Lowest t-units holding an occurrence of q in a leaf within [dmin, dmax], in preorder.
    std::vector<unit_hit> hdlist(std::size_t t, std::string_view q, std::size_t dmin = 1,
                                 std::size_t dmax = SIZE_MAX) const;
    // Units holding both patterns, in preorder, with both frequencies. The doc
    // range is widened to whole units first.
    std::vector<unit_pair> hdint(std::size_t t, std::string_view q1, std::string_view q2, std::size_t dmin = 1,
                                 std::size_t dmax = SIZE_MAX) const;

    unit_mask mask_for_tag(std::size_t t) const;
    unit_mask mask_for_nodes(const std::vector<std::size_t>& opens) const;
    std::optional<interval> expand_marked(const unit_mask& mask, std::size_t i) const;

    // P_t recomputed from P and Tag, for consistency checks.
    bit_vector rebuild_tag_bits(std::size_t t) const;
    std::size_t size_in_bits() const;

    void save(std::ostream& out, bool store_text) const;
    static hier_index load(std::istream& in);

private:
    std::optional<std::size_t> next_tagged_after(std::size_t t, std::size_t j) const;
    void check_tag(std::size_t t) const;

    std::vector<std::string> names_;
    paren_tree tree_;
    wavelet_tree tag_seq_;
    std::vector<paren_tree> tag_trees_;
    std::vector<bool> nests_;
    bit_vector empty_leaf_;
    doc_index docs_;
};

}  // namespace wvx
