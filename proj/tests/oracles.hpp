#pragma once

// Brute-force reference implementations used by the tests. Nothing in here
// touches the wavelet tree; every answer comes from scanning or sorting the
// plain input.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using sym = std::uint64_t;

struct rnv_answer {
    sym symbol;
    std::size_t freq;
    std::size_t rank;
    bool operator==(const rnv_answer&) const = default;
};

// 1-based helpers over a 0-based std::vector.
inline std::size_t rank(const std::vector<sym>& s, sym c, std::size_t i) {
    return static_cast<std::size_t>(std::count(s.begin(), s.begin() + i, c));
}

inline std::optional<std::size_t> select(const std::vector<sym>& s, sym c, std::size_t j) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == c && --j == 0) return i + 1;
    return std::nullopt;
}

inline std::vector<sym> sorted_range(const std::vector<sym>& s, std::size_t i, std::size_t j) {
    std::vector<sym> r(s.begin() + (i - 1), s.begin() + j);
    std::sort(r.begin(), r.end());
    return r;
}

inline std::size_t count(const std::vector<sym>& s, std::size_t xs, std::size_t xe, sym ys, sym ye) {
    std::size_t c = 0;
    for (std::size_t i = xs; i <= xe; ++i)
        if (ys <= s[i - 1] && s[i - 1] <= ye) ++c;
    return c;
}

inline std::map<sym, std::size_t> tally(const std::vector<sym>& s, std::size_t xs, std::size_t xe, sym ys = 1,
                                        sym ye = ~sym{0}) {
    std::map<sym, std::size_t> t;
    for (std::size_t i = xs; i <= xe; ++i)
        if (ys <= s[i - 1] && s[i - 1] <= ye) ++t[s[i - 1]];
    return t;
}

inline std::pair<sym, std::size_t> rqq(const std::vector<sym>& s, std::size_t i, std::size_t j, std::size_t k) {
    auto r = sorted_range(s, i, j);
    sym v = r[k - 1];
    return {v, static_cast<std::size_t>(std::count(r.begin(), r.end(), v))};
}

inline std::optional<rnv_answer> rnv(const std::vector<sym>& s, std::size_t i, std::size_t j, sym x) {
    if (i > j) return std::nullopt;
    auto r = sorted_range(s, i, j);
    auto it = std::lower_bound(r.begin(), r.end(), x);
    if (it == r.end()) return std::nullopt;
    sym v = *it;
    auto hi = std::upper_bound(r.begin(), r.end(), v);
    return rnv_answer{v, static_cast<std::size_t>(hi - it), static_cast<std::size_t>(it - r.begin()) + 1};
}

// Distinct values at sorted positions k..k2 with their counts inside the window.
inline std::vector<std::pair<sym, std::size_t>> mrqq(const std::vector<sym>& s, std::size_t i, std::size_t j,
                                                      std::size_t k, std::size_t k2) {
    auto r = sorted_range(s, i, j);
    std::vector<std::pair<sym, std::size_t>> out;
    for (std::size_t p = k; p <= k2; ++p) {
        if (!out.empty() && out.back().first == r[p - 1]) ++out.back().second;
        else out.push_back({r[p - 1], 1});
    }
    return out;
}

struct range {
    std::size_t lo, hi;
};

// Symbols present in at least t of the ranges, with per-range frequencies.
inline std::vector<std::pair<sym, std::vector<std::size_t>>> rint(const std::vector<sym>& s,
                                                                   const std::vector<range>& ranges, std::size_t t,
                                                                   sym ys = 1, sym ye = ~sym{0}) {
    std::map<sym, std::vector<std::size_t>> f;
    for (std::size_t r = 0; r < ranges.size(); ++r)
        for (std::size_t i = ranges[r].lo; i <= ranges[r].hi; ++i) {
            sym c = s[i - 1];
            if (c < ys || c > ye) continue;
            auto& v = f[c];
            v.resize(ranges.size(), 0);
            ++v[r];
        }
    std::vector<std::pair<sym, std::vector<std::size_t>>> out;
    for (auto& [c, v] : f) {
        std::size_t present = 0;
        for (auto x : v) present += x > 0;
        if (present >= t) out.push_back({c, v});
    }
    return out;
}

// Alternation of a k-range intersection instance over the symbol codes
// present in the sequence: number of symbols in every range plus the minimum
// number of switches of a function C choosing, for each symbol, some range
// that misses it (0 when none does).
inline std::size_t alternation(const std::vector<sym>& s, const std::vector<range>& ranges) {
    std::set<sym> alphabet(s.begin(), s.end());
    const std::size_t k = ranges.size();
    std::vector<std::set<sym>> contents(k);
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t i = ranges[r].lo; i <= ranges[r].hi; ++i) contents[r].insert(s[i - 1]);

    const std::size_t inf = static_cast<std::size_t>(-1) / 2;
    std::vector<std::size_t> dp(k + 1, inf);
    std::size_t zeros = 0;
    bool first = true;
    for (sym c : alphabet) {
        std::vector<bool> allowed(k + 1, false);
        bool everywhere = true;
        for (std::size_t r = 0; r < k; ++r)
            if (!contents[r].count(c)) {
                allowed[r + 1] = true;
                everywhere = false;
            }
        if (everywhere) {
            allowed[0] = true;
            ++zeros;
        }
        std::vector<std::size_t> nd(k + 1, inf);
        std::size_t best_prev = inf;
        for (auto v : dp) best_prev = std::min(best_prev, v);
        for (std::size_t v = 0; v <= k; ++v) {
            if (!allowed[v]) continue;
            if (first) nd[v] = 0;
            else nd[v] = std::min(dp[v], best_prev + 1);
        }
        dp = nd;
        first = false;
    }
    std::size_t switches = 0;
    if (!first) {
        switches = inf;
        for (auto v : dp) switches = std::min(switches, v);
    }
    return zeros + switches;
}

// Random sequence generator: uniform or Zipf-skewed draws over [1, sigma].
inline std::vector<sym> random_sequence(std::mt19937_64& rng, std::size_t n, sym sigma, bool zipf) {
    std::vector<sym> s(n);
    if (!zipf) {
        std::uniform_int_distribution<sym> d(1, sigma);
        for (auto& x : s) x = d(rng);
        return s;
    }
    std::vector<double> w(sigma);
    for (std::size_t r = 0; r < sigma; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), 1.1);
    std::discrete_distribution<std::size_t> d(w.begin(), w.end());
    // Shuffle which symbols are frequent so skew is not always toward 1.
    std::vector<sym> perm(sigma);
    for (std::size_t r = 0; r < sigma; ++r) perm[r] = r + 1;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& x : s) x = perm[d(rng)];
    return s;
}

inline std::size_t count_substring(const std::string& text, const std::string& q) {
    if (q.empty()) return 0;
    std::size_t c = 0;
    for (auto p = text.find(q); p != std::string::npos; p = text.find(q, p + 1)) ++c;
    return c;
}

}  // namespace oracle
