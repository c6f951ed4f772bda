#include "wvx/inv_index.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "wvx/serialize.hpp"

namespace wvx {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (c < 128 && std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

stem_map parse_stem_map(std::string_view text) {
    stem_map out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string term, stem, extra;
        if (!(fields >> term)) continue;
        if (!(fields >> stem) || (fields >> extra))
            throw std::invalid_argument("stem map line " + std::to_string(no) + ": expected \"term stem\"");
        out[term] = stem;
    }
    return out;
}

// ---------------------------------------------------------------------------

vocabulary::vocabulary(std::vector<std::string> terms, const stem_map& stems) : stemmed_(!stems.empty()) {
    std::vector<std::pair<std::string, std::string>> keyed;
    for (auto& t : terms) {
        auto it = stems.find(t);
        keyed.push_back({it == stems.end() ? t : it->second, std::move(t)});
    }
    std::sort(keyed.begin(), keyed.end());
    for (auto& [k, t] : keyed) {
        if (!ids_.emplace(t, terms_.size() + 1).second) throw std::invalid_argument("duplicate term " + t);
        keys_.push_back(k);
        terms_.push_back(t);
    }
}

std::optional<std::size_t> vocabulary::find(std::string_view term) const {
    auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::pair<std::size_t, std::size_t>> vocabulary::stem_range(std::string_view stem) const {
    std::size_t lo, hi;
    if (stemmed_) {
        auto a = std::lower_bound(keys_.begin(), keys_.end(), stem);
        auto b = std::upper_bound(a, keys_.end(), stem, [](std::string_view s, const std::string& k) { return s < k; });
        lo = a - keys_.begin();
        hi = b - keys_.begin();
    } else {
        auto a = std::lower_bound(terms_.begin(), terms_.end(), stem);
        auto b = a;
        while (b != terms_.end() && b->compare(0, stem.size(), stem) == 0) ++b;
        lo = a - terms_.begin();
        hi = b - terms_.begin();
    }
    if (lo == hi) return std::nullopt;
    return std::pair{lo + 1, hi};
}

void vocabulary::save(std::ostream& out) const {
    io::put_magic(out, "WVOC");
    io::put_u64(out, stemmed_ ? 1 : 0);
    io::put_u64(out, terms_.size());
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        io::put_bytes(out, terms_[t]);
        io::put_bytes(out, keys_[t]);
    }
}

vocabulary vocabulary::load(std::istream& in) {
    io::expect_magic(in, "WVOC");
    vocabulary v;
    v.stemmed_ = io::get_u64(in) != 0;
    const auto count = io::get_u64(in);
    for (std::uint64_t t = 0; t < count; ++t) {
        v.terms_.push_back(io::get_bytes(in));
        v.keys_.push_back(io::get_bytes(in));
        if (!v.ids_.emplace(v.terms_.back(), t + 1).second) throw io::format_error("vocabulary: duplicate term");
    }
    for (std::size_t t = 1; t < count; ++t)
        if (std::tie(v.keys_[t - 1], v.terms_[t - 1]) >= std::tie(v.keys_[t], v.terms_[t]))
            throw io::format_error("vocabulary: terms out of order");
    return v;
}

// ---------------------------------------------------------------------------

ft_iterator::ft_iterator(const wavelet_tree& wt, interval range)
    : range_(range), ranks_(wt, range.lo, range.hi), docs_(wt, range.lo, range.hi) {}

std::optional<std::size_t> ft_iterator::seek_rank(std::size_t k) {
    if (k == 0) throw std::out_of_range("seek_rank: ranks start at 1");
    if (k < ranks_.last_rank()) throw std::invalid_argument("seek_rank: rank must not decrease");
    if (exhausted_) return std::nullopt;
    if (k > range_.length()) {
        exhausted_ = true;
        return std::nullopt;
    }
    return ranks_.seek(k).symbol;
}

std::optional<std::pair<std::size_t, std::size_t>> ft_iterator::seek_doc(std::size_t d) {
    if (last_doc_ && d < *last_doc_) throw std::invalid_argument("seek_doc: doc id must not decrease");
    if (exhausted_) return std::nullopt;
    if (last_doc_ && d == *last_doc_) return last_hit_;
    last_doc_ = d;
    auto hit = docs_.seek(d);
    if (!hit) {
        exhausted_ = true;
        last_hit_.reset();
        return std::nullopt;
    }
    last_hit_ = std::pair<std::size_t, std::size_t>{hit->symbol, hit->rank};
    return last_hit_;
}

// ---------------------------------------------------------------------------

inv_index::inv_index(const std::vector<std::string>& docs, const stem_map& stems) : m_(docs.size()) {
    if (docs.empty()) throw std::invalid_argument("inv_index: empty collection");
    std::unordered_map<std::string, std::vector<posting>> by_term;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::unordered_map<std::string, std::size_t> tf;
        for (auto& tok : tokenize(docs[d])) ++tf[tok];
        for (auto& [term, f] : tf) {
            by_term[term].push_back({d + 1, f});
            tokens_ += f;
        }
    }
    std::vector<std::string> terms;
    for (auto& [term, list] : by_term) terms.push_back(term);
    vocab_ = vocabulary(std::move(terms), stems);
    std::vector<std::vector<posting>> lists(vocab_.size());
    for (std::size_t t = 1; t <= vocab_.size(); ++t) lists[t - 1] = std::move(by_term[vocab_.term(t)]);
    build(lists);
}

inv_index::inv_index(vocabulary vocab, const std::vector<std::vector<posting>>& lists, std::size_t docs)
    : vocab_(std::move(vocab)), m_(docs) {
    if (lists.size() != vocab_.size()) throw std::invalid_argument("inv_index: one list per term required");
    for (auto& l : lists)
        for (auto& p : l) {
            if (p.doc == 0 || p.doc > m_ || p.tf == 0) throw std::invalid_argument("inv_index: bad posting");
            tokens_ += p.tf;
        }
    build(lists);
}

void inv_index::build(const std::vector<std::vector<posting>>& lists) {
    std::vector<symbol_t> seq;
    std::vector<std::size_t> starts, tf_starts;
    std::vector<bool> runs, marks;
    for (auto list : lists) {
        if (list.empty()) throw std::invalid_argument("inv_index: every term needs at least one posting");
        std::sort(list.begin(), list.end(),
                  [](const posting& a, const posting& b) { return a.tf != b.tf ? a.tf > b.tf : a.doc < b.doc; });
        starts.push_back(seq.size() + 1);
        tf_starts.push_back(marks.size() + 1);
        std::vector<bool> t_bits(list.front().tf, false);
        for (std::size_t i = 0; i < list.size(); ++i) {
            seq.push_back(list[i].doc);
            const bool first = i == 0 || list[i].tf != list[i - 1].tf;
            runs.push_back(first);
            t_bits[list[i].tf - 1] = true;
        }
        marks.insert(marks.end(), t_bits.begin(), t_bits.end());
    }
    // Each doc at most once per list.
    std::vector<std::size_t> seen(m_ + 1, 0);
    for (std::size_t t = 0; t < starts.size(); ++t) {
        const std::size_t end = t + 1 < starts.size() ? starts[t + 1] : seq.size() + 1;
        for (std::size_t i = starts[t]; i < end; ++i) {
            if (seen[seq[i - 1]] == t + 1) throw std::invalid_argument("inv_index: doc listed twice for one term");
            seen[seq[i - 1]] = t + 1;
        }
    }
    if (seq.empty()) throw std::invalid_argument("inv_index: collection has no terms");
    L_ = wavelet_tree(seq, m_);
    starts_ = sparse_bit_vector(starts, seq.size());
    runs_ = bit_vector(runs);
    tf_marks_ = bit_vector(marks);
    tf_starts_ = sparse_bit_vector(tf_starts, marks.size());
}

void inv_index::check_term(std::size_t t) const {
    if (t == 0 || t > terms()) throw std::out_of_range("no term with id " + std::to_string(t));
}

void inv_index::check_range(term_range r) const {
    check_term(r.first);
    check_term(r.last);
    if (r.first > r.last) throw std::invalid_argument("empty term range");
}

void inv_index::check_doc(std::size_t d) const {
    if (d == 0 || d > m_) throw std::out_of_range("no document " + std::to_string(d));
}

std::size_t inv_index::list_start(std::size_t t) const {
    check_term(t);
    return *starts_.select1(t);
}

std::size_t inv_index::df(std::size_t t) const {
    const std::size_t next = t == terms() ? size() + 1 : list_start(t + 1);
    return next - list_start(t);
}

interval inv_index::span(term_range r) const {
    check_range(r);
    const std::size_t end = r.last == terms() ? size() : list_start(r.last + 1) - 1;
    return {list_start(r.first), end};
}

std::size_t inv_index::tf_start(std::size_t t) const { return *tf_starts_.select1(t); }

std::size_t inv_index::max_tf(std::size_t t) const {
    check_term(t);
    const std::size_t next = t == terms() ? tf_marks_.size() + 1 : tf_start(t + 1);
    return next - tf_start(t);
}

std::size_t inv_index::distinct_tf(std::size_t t) const {
    const std::size_t s = list_start(t);
    return runs_.rank1(s + df(t) - 1) - runs_.rank1(s - 1);
}

std::size_t inv_index::run_of(std::size_t t, std::size_t i) const {
    const std::size_t s = list_start(t);
    return runs_.rank1(s + i - 1) - runs_.rank1(s - 1);
}

std::size_t inv_index::tf_at(std::size_t t, std::size_t i) const {
    check_term(t);
    if (i == 0 || i > df(t)) throw std::out_of_range("tf_at: offset outside the list");
    const std::size_t v = distinct_tf(t);
    const std::size_t base = tf_start(t);
    const std::size_t before = tf_marks_.rank1(base - 1);
    return *tf_marks_.select1(before + v - run_of(t, i) + 1) - base + 1;
}

std::size_t inv_index::lt_get(std::size_t t, std::size_t i) const {
    check_term(t);
    if (i == 0 || i > df(t)) throw std::out_of_range("lt_get: offset outside the list");
    return L_.access(list_start(t) + i - 1);
}

std::vector<posting> inv_index::lt_segment(std::size_t t, std::size_t i, std::size_t i2, std::size_t dmin,
                                           std::size_t dmax) const {
    check_term(t);
    if (i == 0 || i > i2 || i2 > df(t)) throw std::out_of_range("lt_segment: offsets outside the list");
    const std::size_t s = list_start(t);
    std::vector<posting> out;
    for (auto& [doc, c] : L_.report(s + i - 1, s + i2 - 1, dmin, dmax)) {
        out.push_back({static_cast<std::size_t>(doc), tf_at(t, *contains(t, doc))});
    }
    return out;
}

std::size_t inv_index::ft_get(term_range r, std::size_t k) const {
    auto sp = span(r);
    if (k == 0 || k > sp.length()) throw std::out_of_range("ft_get: rank outside the list");
    return rqq(L_, sp.lo, sp.hi, k).symbol;
}

std::vector<std::size_t> inv_index::ft_segment(term_range r, std::size_t k, std::size_t k2) const {
    auto sp = span(r);
    std::vector<std::size_t> out;
    for (auto& [doc, c] : mrqq(L_, sp.lo, sp.hi, k, k2)) out.insert(out.end(), c, doc);
    return out;
}

ft_iterator inv_index::ft_iter(term_range r) const { return ft_iterator(L_, span(r)); }

std::vector<symbol_count> inv_index::docs_of(term_range r, std::size_t dmin, std::size_t dmax) const {
    auto sp = span(r);
    return L_.report(sp.lo, sp.hi, dmin, dmax);
}

std::vector<doc_hit> inv_index::intersect(const std::vector<term_range>& ranges, std::size_t threshold,
                                          std::size_t dmin, std::size_t dmax) const {
    std::vector<interval> spans;
    for (auto& r : ranges) spans.push_back(span(r));
    std::vector<doc_hit> out;
    if (dmin > dmax) return out;
    rint(L_, spans, threshold, dmin, dmax,
         [&](const rint_hit& h) { out.push_back({static_cast<std::size_t>(h.symbol), h.freqs}); });
    return out;
}

std::vector<std::size_t> inv_index::local_vocab(std::size_t d) const {
    check_doc(d);
    std::vector<std::size_t> out;
    for (std::size_t i = 1;; ++i) {
        auto p = L_.select(d, i);
        if (!p) break;
        out.push_back(starts_.rank1(*p));
    }
    return out;
}

std::optional<std::size_t> inv_index::contains(std::size_t t, std::size_t d) const {
    check_doc(d);
    auto sp = span(t);
    const std::size_t before = L_.rank(d, sp.lo - 1);
    if (L_.rank(d, sp.hi) == before) return std::nullopt;
    return *L_.select(d, before + 1) - sp.lo + 1;
}

std::size_t inv_index::persin_prefix(std::size_t t, std::size_t f) const {
    check_term(t);
    if (f == 0) throw std::invalid_argument("persin_prefix: threshold must be at least 1");
    const std::size_t v = distinct_tf(t);
    const std::size_t base = tf_start(t);
    const std::size_t below = tf_marks_.rank1(base - 1 + std::min(f, max_tf(t) + 1) - 1) - tf_marks_.rank1(base - 1);
    const std::size_t r = v - below;  // runs with tf >= f
    if (r == v) return df(t);
    if (r == 0) return 0;
    const std::size_t s = list_start(t);
    return *runs_.select1(runs_.rank1(s - 1) + r + 1) - s;
}

std::vector<posting> inv_index::persin_round(const std::vector<posting>& acc, std::size_t t, std::size_t f) const {
    const std::size_t p = persin_prefix(t, f);
    if (p == 0) return acc;
    auto seg = lt_segment(t, 1, p);
    std::vector<posting> out;
    std::size_t a = 0, b = 0;
    while (a < acc.size() || b < seg.size()) {
        if (b == seg.size() || (a < acc.size() && acc[a].doc < seg[b].doc)) {
            out.push_back(acc[a++]);
        } else if (a == acc.size() || seg[b].doc < acc[a].doc) {
            out.push_back(seg[b++]);
        } else {
            out.push_back({acc[a].doc, acc[a].tf + seg[b].tf});
            ++a;
            ++b;
        }
    }
    return out;
}

std::size_t inv_index::sum_tf_stemmed(term_range r, std::size_t d) const {
    check_doc(d);
    auto sp = span(r);
    std::size_t sum = 0;
    for (std::size_t k = L_.rank(d, sp.lo - 1) + 1, e = L_.rank(d, sp.hi); k <= e; ++k) {
        const std::size_t p = *L_.select(d, k);
        const std::size_t t = starts_.rank1(p);
        sum += tf_at(t, p - list_start(t) + 1);
    }
    return sum;
}

std::size_t inv_index::size_in_bits() const {
    return L_.level_bits() + L_.aux_bits() + starts_.size_in_bits() + runs_.payload_bits() + runs_.aux_bits() +
           tf_marks_.payload_bits() + tf_marks_.aux_bits() + tf_starts_.size_in_bits();
}

void inv_index::save(std::ostream& out) const {
    io::put_magic(out, "WINV");
    io::put_u64(out, m_);
    io::put_u64(out, tokens_);
    vocab_.save(out);
    L_.save(out);
    starts_.save(out);
    runs_.save(out);
    tf_marks_.save(out);
    tf_starts_.save(out);
}

inv_index inv_index::load(std::istream& in) {
    io::expect_magic(in, "WINV");
    inv_index x;
    x.m_ = io::get_u64(in);
    x.tokens_ = io::get_u64(in);
    x.vocab_ = vocabulary::load(in);
    x.L_ = wavelet_tree::load(in);
    x.starts_ = sparse_bit_vector::load(in);
    x.runs_ = bit_vector::load(in);
    x.tf_marks_ = bit_vector::load(in);
    x.tf_starts_ = sparse_bit_vector::load(in);
    const std::size_t n = x.L_.size();
    if (x.L_.sigma() != x.m_ || x.starts_.size() != n || x.starts_.ones() != x.vocab_.size() ||
        x.runs_.size() != n || x.tf_starts_.ones() != x.vocab_.size() || x.tf_starts_.size() != x.tf_marks_.size() ||
        (n > 0 && (!x.starts_.access(1) || !x.runs_.access(1))))
        throw io::format_error("inverted index: inconsistent section sizes");
    for (std::size_t t = 1; t <= x.vocab_.size(); ++t)
        if (x.distinct_tf(t) != x.tf_marks_.rank1(x.tf_start(t) + x.max_tf(t) - 1) - x.tf_marks_.rank1(x.tf_start(t) - 1))
            throw io::format_error("inverted index: tf runs disagree with tf marks");
    return x;
}

}  // namespace wvx
