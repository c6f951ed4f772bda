#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "wvx/doc_index.hpp"
#include "wvx/suffix_array.hpp"

using namespace wvx;

namespace {

std::vector<std::string> random_collection(std::mt19937_64& rng, std::size_t max_docs, std::size_t max_total,
                                           const std::string& alphabet) {
    const std::size_t m = 1 + rng() % max_docs;
    const std::size_t budget = max_total / m;
    std::vector<std::string> docs(m);
    for (auto& d : docs) {
        const std::size_t len = rng() % (budget + 1);
        for (std::size_t k = 0; k < len; ++k) d += alphabet[rng() % alphabet.size()];
    }
    return docs;
}

std::string random_pattern(std::mt19937_64& rng, const std::vector<std::string>& docs, const std::string& alphabet) {
    // Half the patterns are cut from the text so that most of them occur.
    const auto& d = docs[rng() % docs.size()];
    const std::size_t len = 1 + rng() % 5;
    if (rng() % 2 && d.size() >= len) return d.substr(rng() % (d.size() - len + 1), len);
    std::string q;
    for (std::size_t k = 0; k < len; ++k) q += alphabet[rng() % alphabet.size()];
    return q;
}

std::vector<std::size_t> naive_tf(const std::vector<std::string>& docs, const std::string& q) {
    std::vector<std::size_t> tf;
    for (auto& d : docs) tf.push_back(oracle::count_substring(d, q));
    return tf;
}

}  // namespace

TEST_CASE("suffix array matches a comparison sort") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = rng() % 300;
        const std::uint32_t sigma = 1 + rng() % 4;
        std::vector<std::uint32_t> t(n);
        for (auto& c : t) c = rng() % sigma;
        std::vector<std::uint64_t> want(n);
        for (std::size_t i = 0; i < n; ++i) want[i] = i;
        std::sort(want.begin(), want.end(), [&](auto a, auto b) {
            return std::lexicographical_compare(t.begin() + a, t.end(), t.begin() + b, t.end());
        });
        REQUIRE(suffix_array(t, sigma) == want);
    }
}

TEST_CASE("ana/banana examples") {
    doc_index idx({"ana", "banana"});
    CHECK(idx.docs() == 2);
    CHECK(idx.pattern_search("an").length() == 3);
    CHECK(idx.pattern_search("a").length() == 5);  // a: 2 in ana, 3 in banana
    CHECK(idx.pattern_search("bananas").empty());
    CHECK(idx.dlist("an") == std::vector<symbol_count>{{1, 1}, {2, 2}});
    CHECK(idx.dlist("an", 2, 2) == std::vector<symbol_count>{{2, 2}});
    CHECK(idx.dlist("xyz").empty());
    CHECK(idx.dfreq("na", 2) == 2);
    CHECK(idx.dfreq("b", 1) == 0);
    CHECK(idx.dfreq("a", 1) == 2);
    CHECK(idx.dint({"an", "ba"}, 2) == std::vector<doc_hit>{{2, {2, 1}}});
    CHECK(idx.dint({"an", "ba"}, 1) == std::vector<doc_hit>{{1, {1, 0}}, {2, {2, 1}}});
    CHECK(idx.dint({"an", "zz"}, 2).empty());
    CHECK(idx.dint({"an", "zz"}, 1) == std::vector<doc_hit>{{1, {1, 0}}, {2, {2, 0}}});
}

TEST_CASE("terminator byte is rejected") {
    CHECK_THROWS_AS(doc_index({std::string("a\0b", 3)}), sentinel_collision);
    doc_index idx({"abc"});
    CHECK_THROWS_AS(idx.pattern_search(std::string("\0", 1)), sentinel_collision);
    CHECK_THROWS_AS(idx.pattern_search(""), std::invalid_argument);
}

TEST_CASE("document array agrees with text positions") {
    doc_index idx({"", "xy", "", "abcab"});
    CHECK(idx.doc_length(1) == 0);
    CHECK(idx.doc_length(4) == 5);
    for (std::size_t i = 1; i <= idx.size(); ++i) REQUIRE(idx.doc_array().access(i) == idx.doc_of(idx.suffix(i)));
    CHECK(idx.dlist("ab") == std::vector<symbol_count>{{4, 2}});
}

TEST_CASE("random collections against the substring scanner") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 30; ++round) {
        const std::string alphabet = round % 2 ? "ab" : "abcdefgh";
        auto docs = random_collection(rng, 64, 6000, alphabet);
        doc_index idx(docs);
        const std::size_t m = docs.size();
        for (int q = 0; q < 60; ++q) {
            const auto pat = random_pattern(rng, docs, alphabet);
            auto tf = naive_tf(docs, pat);
            std::size_t occ = 0;
            for (auto f : tf) occ += f;
            REQUIRE(idx.occurrences(pat) == occ);

            std::vector<symbol_count> want;
            for (std::size_t d = 0; d < m; ++d)
                if (tf[d]) want.push_back({d + 1, tf[d]});
            REQUIRE(idx.dlist(pat) == want);
            const std::size_t d = 1 + rng() % m;
            REQUIRE(idx.dfreq(pat, d) == tf[d - 1]);

            std::size_t dmin = 1 + rng() % m, dmax = 1 + rng() % m;
            if (dmin > dmax) std::swap(dmin, dmax);
            std::vector<symbol_count> filtered;
            for (auto& h : want)
                if (h.symbol >= dmin && h.symbol <= dmax) filtered.push_back(h);
            REQUIRE(idx.dlist(pat, dmin, dmax) == filtered);

            const std::size_t k = 1 + rng() % 3;
            std::vector<std::string> pats{pat};
            while (pats.size() < k) pats.push_back(random_pattern(rng, docs, alphabet));
            std::vector<std::vector<std::size_t>> tfs;
            for (auto& p : pats) tfs.push_back(naive_tf(docs, p));
            for (std::size_t t = 1; t <= k; ++t) {
                std::vector<doc_hit> hits;
                for (std::size_t dd = 0; dd < m; ++dd) {
                    std::vector<std::size_t> f;
                    std::size_t present = 0;
                    for (auto& col : tfs) {
                        f.push_back(col[dd]);
                        present += col[dd] > 0;
                    }
                    if (present >= t && dd + 1 >= dmin && dd + 1 <= dmax) hits.push_back({dd + 1, f});
                }
                REQUIRE(idx.dint(pats, t, dmin, dmax) == hits);
            }
        }
    }
}

TEST_CASE("doc index serialization with and without text") {
    std::vector<std::string> docs{"mississippi", "missouri", "sip"};
    doc_index idx(docs);
    for (bool store : {true, false}) {
        std::stringstream ss;
        idx.save(ss, store);
        auto back = doc_index::load(ss);
        CHECK(back.has_text() == store);
        if (!store) {
            CHECK_THROWS_AS(back.dlist("ss"), text_unavailable);
            CHECK_THROWS_AS(back.attach_text({"mississippi", "missouri", "sap"}), std::invalid_argument);
            back.attach_text(docs);
        }
        CHECK(back.dlist("ss") == idx.dlist("ss"));
        CHECK(back.dint({"is", "si"}, 2) == idx.dint({"is", "si"}, 2));
    }
}
