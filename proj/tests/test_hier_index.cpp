#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "xtree_oracle.hpp"
#include "wvx/hier_index.hpp"

using namespace wvx;

namespace {

using oracle::random_text;
using oracle::random_tree;
using oracle::xtree;

const char* kSample = "<a><b>x</b><b>y</b></a>";

}  // namespace

TEST_CASE("paren tree navigation on a hand tree") {
    // (()(()()))  nodes at 1,2,4,5,7
    paren_tree p(bit_vector::from_string("1101101000"));
    CHECK(p.nodes() == 5);
    CHECK(p.leaves() == 3);
    CHECK(p.find_close(1) == 10);
    CHECK(p.find_close(4) == 9);
    CHECK(p.find_open(9) == 4);
    CHECK(p.enclose(4) == 1u);
    CHECK(p.enclose(7) == 4u);
    CHECK(p.enclose(1) == std::nullopt);
    CHECK(p.enclosing(3) == 1u);
    CHECK(p.enclosing(6) == 4u);
    CHECK(p.subtree_size(4) == 3);
    CHECK(p.leaf_span(4) == std::pair<std::size_t, std::size_t>{2, 3});
    CHECK(p.select_leaf(3) == 7u);
    CHECK_THROWS_AS(paren_tree(bit_vector::from_string("1001")), std::invalid_argument);
    CHECK_THROWS_AS(paren_tree(bit_vector::from_string("110")), std::invalid_argument);
}

TEST_CASE("paren tree agrees with a stack walk on long random strings") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 20; ++round) {
        std::vector<bool> bits;
        std::size_t depth = 0;
        const std::size_t n = 1 + rng() % 3000;
        for (std::size_t k = 0; k < n; ++k) {
            bool open = depth == 0 || rng() % 2;
            bits.push_back(open);
            depth += open ? 1 : -1;
        }
        while (depth--) bits.push_back(false);
        paren_tree p{bit_vector(bits)};
        std::vector<std::size_t> stack, close(bits.size() + 1), parent(bits.size() + 1, 0);
        for (std::size_t q = 1; q <= bits.size(); ++q) {
            if (bits[q - 1]) {
                parent[q] = stack.empty() ? 0 : stack.back();
                stack.push_back(q);
            } else {
                close[stack.back()] = q;
                stack.pop_back();
            }
        }
        for (std::size_t q = 1; q <= bits.size(); ++q) {
            if (!bits[q - 1]) continue;
            REQUIRE(p.find_close(q) == close[q]);
            REQUIRE(p.find_open(close[q]) == q);
            REQUIRE(p.enclose(q).value_or(0) == parent[q]);
        }
    }
}

TEST_CASE("minimal XML parsing") {
    auto l = parse_xml(" <r>lead<x>1</x>  <y/>tail</r>\n");
    CHECK(l.leaf_text == std::vector<std::string>{"lead", "1", "", "tail"});
    CHECK(l.tags == std::vector<std::string>{"r", "#text", "#text", "x", "x", "y", "y", "#text", "#text", "r"});
    CHECK_THROWS_AS(parse_xml("<a><b></a>"), xml_error);
    CHECK_THROWS_AS(parse_xml("<a x='1'></a>"), xml_error);
    CHECK_THROWS_AS(parse_xml("<a></a><b></b>"), xml_error);
    CHECK_THROWS_AS(parse_xml("<a>"), xml_error);
    CHECK_THROWS_AS(parse_xml(""), xml_error);
    CHECK_THROWS_AS(parse_xml("<!-- c --><a/>"), xml_error);
    try {
        parse_xml("<a>\n  <b></c></a>");
        FAIL("expected an error");
    } catch (const xml_error& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("sample document examples") {
    auto h = hier_index::from_xml(kSample);
    const std::size_t a = *h.tag_id("a"), b = *h.tag_id("b");
    CHECK(h.tags() == 2);
    CHECK(h.leaves() == 2);
    CHECK(h.expand_tag(b, 2) == 4u);
    CHECK(h.expand_tag(a, 1) == 1u);
    CHECK(h.expand_tag(a, 2) == 1u);
    CHECK(h.leaf_range(1) == interval{1, 2});
    CHECK(h.leaf_range(2) == interval{1, 1});
    CHECK(h.leaf_range(4) == interval{2, 2});
    CHECK_THROWS_AS(h.leaf_range(3), std::invalid_argument);
    CHECK(h.hdfreq("y", 1) == 1);
    CHECK(h.hdfreq("z", 1) == 0);
    CHECK(h.hdfreq("x", 4) == 0);
    CHECK(h.hdlist(a, "x") == std::vector<unit_hit>{{1, 1}});
    CHECK(h.hdlist(b, "q").empty());
    CHECK(h.hdint(a, "x", "y") == std::vector<unit_pair>{{1, 1, 1}});
    CHECK(h.hdint(b, "x", "y").empty());
    CHECK(h.hdint(b, "x", "x") == std::vector<unit_pair>{{2, 1, 1}});

    auto root_only = h.mask_for_nodes({1});
    CHECK(h.expand_marked(root_only, 2) == interval{1, 2});
    auto bs = h.mask_for_nodes({2, 4});
    CHECK(h.expand_marked(bs, 2) == interval{2, 2});

    auto with_c = hier_index::from_xml("<a><b>x</b><b>y</b><c>z</c></a>");
    CHECK(with_c.expand_tag(*with_c.tag_id("b"), 3) == std::nullopt);
    CHECK(with_c.expand_marked(with_c.mask_for_tag(*with_c.tag_id("b")), 3) == std::nullopt);

    auto both = hier_index::from_xml("<a><b>xa</b><b>ya</b></a>");
    CHECK(both.hdlist(*both.tag_id("b"), "a") == std::vector<unit_hit>{{2, 1}, {4, 1}});
}

TEST_CASE("a unit whose two patterns straddle a split is still found") {
    // Leaves 1..4; the c unit holds leaves 2 and 3 with one pattern each.
    auto h = hier_index::from_xml("<r><c>p</c><c><x>p</x><x>q</x></c><c>q</c></r>");
    const std::size_t c = *h.tag_id("c");
    auto got = h.hdint(c, "p", "q");
    REQUIRE(got.size() == 1);
    CHECK(got[0].node == 4);
    CHECK(got[0].f1 == 1);
    CHECK(got[0].f2 == 1);
}

TEST_CASE("nested units of one tag") {
    auto h = hier_index::from_xml("<s><p>k</p><s><p>k</p><p>m</p></s><p>k</p></s>");
    const std::size_t s = *h.tag_id("s");
    CHECK(h.tag_nests(s));
    auto got = h.hdlist(s, "k");
    REQUIRE(got.size() == 2);
    CHECK(got[0] == unit_hit{1, 3});
    CHECK(got[1].freq == 1);
    CHECK(h.hdint(s, "k", "m") == std::vector<unit_pair>{{got[1].node, 1, 1}});
}

TEST_CASE("random trees against tree-walk oracles") {
    std::mt19937_64 rng(808);
    for (int round = 0; round < 40; ++round) {
        const std::size_t tags = 1 + rng() % 8;
        auto t = random_tree(rng, 200, tags, round % 2 == 1);
        auto h = hier_index::from_xml(t.xml());
        const std::size_t m = t.leaf_node.size();
        REQUIRE(h.leaves() == m);
        REQUIRE(h.nodes() == t.nodes.size());
        for (std::size_t v = 0; v < t.nodes.size(); ++v) {
            REQUIRE(h.tag_name(h.tag_of(t.nodes[v].open)) == t.nodes[v].tag);
            REQUIRE(h.leaf_range(t.nodes[v].open) == interval{t.nodes[v].first_leaf, t.nodes[v].last_leaf});
        }
        for (std::size_t i = 1; i <= m; ++i) REQUIRE(h.leaf_is_empty(i) == t.nodes[t.leaf_node[i - 1]].text.empty());

        for (std::size_t tag = 1; tag <= h.tags(); ++tag) {
            const auto& name = h.tag_name(tag);
            REQUIRE(h.rebuild_tag_bits(tag) == h.tag_tree(tag).bits());
            auto mask = h.mask_for_tag(tag);
            for (std::size_t i = 1; i <= m; ++i) {
                auto want = t.lowest(i, name);
                auto got = h.expand_tag(tag, i);
                REQUIRE(got.has_value() == want.has_value());
                if (want) REQUIRE(*got == t.nodes[*want].open);
                auto marked = h.expand_marked(mask, i);
                REQUIRE(marked.has_value() == got.has_value());
                if (got) REQUIRE(*marked == h.leaf_range(*got));
            }

            for (int q = 0; q < 8; ++q) {
                const std::string q1 = random_text(rng, 2) + "abc"[rng() % 3];
                const std::string q2 = random_text(rng, 2) + "abc"[rng() % 3];
                std::size_t dmin = 1 + rng() % m, dmax = 1 + rng() % m;
                if (dmin > dmax) std::swap(dmin, dmax);
                if (q % 2) {
                    dmin = 1;
                    dmax = m;
                }
                auto want = t.hdlist(name, q1, dmin, dmax);
                auto got = h.hdlist(tag, q1, dmin, dmax);
                REQUIRE(got.size() == want.size());
                for (std::size_t k = 0; k < got.size(); ++k) {
                    REQUIRE(got[k].node == want[k].first);
                    REQUIRE(got[k].freq == want[k].second);
                    REQUIRE(h.hdfreq(q1, got[k].node) == want[k].second);
                }

                // hdint snaps the range outward to whole units first.
                std::size_t smin = dmin, smax = dmax;
                if (auto u = t.lowest(dmin, name)) smin = t.nodes[*u].first_leaf;
                if (auto u = t.lowest(dmax, name)) smax = t.nodes[*u].last_leaf;
                auto a = t.hdlist(name, q1, smin, smax), b = t.hdlist(name, q2, smin, smax);
                std::vector<unit_pair> expect;
                for (auto& [node, f1] : a)
                    for (auto& [node2, f2] : b)
                        if (node == node2) expect.push_back({node, f1, f2});
                REQUIRE(h.hdint(tag, q1, q2, dmin, dmax) == expect);
            }
        }

        // Arbitrary masks: a random node subset.
        std::vector<std::size_t> chosen;
        std::set<std::size_t> chosen_idx;
        for (std::size_t v = 0; v < t.nodes.size(); ++v)
            if (rng() % 4 == 0) {
                chosen.push_back(t.nodes[v].open);
                chosen_idx.insert(v);
            }
        auto mask = h.mask_for_nodes(chosen);
        for (std::size_t i = 1; i <= m; ++i) {
            std::optional<std::size_t> want;
            for (std::size_t v = t.leaf_node[i - 1]; v != SIZE_MAX && !want; v = t.nodes[v].parent)
                if (chosen_idx.count(v)) want = v;
            auto got = h.expand_marked(mask, i);
            REQUIRE(got.has_value() == want.has_value());
            if (want) REQUIRE(*got == interval{t.nodes[*want].first_leaf, t.nodes[*want].last_leaf});
        }
    }
}

TEST_CASE("hier index serialization") {
    auto h = hier_index::from_xml("<r><s><p>alpha</p><p>beta</p></s><s><p>gamma alpha</p></s></r>");
    std::stringstream ss;
    h.save(ss, true);
    auto back = hier_index::load(ss);
    const std::size_t s = *back.tag_id("s");
    CHECK(back.hdlist(s, "alpha") == h.hdlist(s, "alpha"));
    CHECK(back.hdint(s, "alpha", "beta") == h.hdint(s, "alpha", "beta"));
    CHECK(back.tag_nests(s) == h.tag_nests(s));
}
