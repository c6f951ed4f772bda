#include "wvx/suffix_array.hpp"

#include <algorithm>
#include <numeric>

namespace wvx {

std::vector<std::uint64_t> suffix_array(std::span<const std::uint32_t> text, std::uint32_t alphabet) {
    const std::size_t n = text.size();
    std::vector<std::uint64_t> sa(n), tmp(n);
    if (n == 0) return sa;

    // rank[i] in [1, classes]; 0 stands for "past the end".
    std::vector<std::uint64_t> rank(n), next(n);
    std::size_t classes = alphabet;
    for (std::size_t i = 0; i < n; ++i) rank[i] = text[i] + 1;

    std::vector<std::size_t> bucket;
    auto key2 = [&](std::uint64_t i, std::size_t h) { return i + h < n ? rank[i + h] : 0; };

    for (std::size_t h = 0;; h = h ? 2 * h : 1) {
        // Radix sort by (rank[i], rank[i+h]): second key first, then a stable pass on the first.
        bucket.assign(classes + 2, 0);
        if (h == 0) {
            std::iota(tmp.begin(), tmp.end(), 0);
        } else {
            for (std::size_t i = 0; i < n; ++i) ++bucket[key2(i, h) + 1];
            for (std::size_t c = 1; c < bucket.size(); ++c) bucket[c] += bucket[c - 1];
            for (std::size_t i = 0; i < n; ++i) tmp[bucket[key2(i, h)]++] = i;
            bucket.assign(classes + 2, 0);
        }
        for (std::size_t i = 0; i < n; ++i) ++bucket[rank[i] + 1];
        for (std::size_t c = 1; c < bucket.size(); ++c) bucket[c] += bucket[c - 1];
        for (std::size_t p = 0; p < n; ++p) sa[bucket[rank[tmp[p]]]++] = tmp[p];

        next[sa[0]] = 1;
        for (std::size_t p = 1; p < n; ++p) {
            const auto a = sa[p - 1], b = sa[p];
            const bool same = rank[a] == rank[b] && (h == 0 || key2(a, h) == key2(b, h));
            next[b] = next[a] + (same ? 0 : 1);
        }
        rank.swap(next);
        classes = rank[sa[n - 1]];
        if (classes == n) break;
        if (h >= n) break;
    }
    return sa;
}

}  // namespace wvx
