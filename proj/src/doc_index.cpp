#include "wvx/doc_index.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "wvx/serialize.hpp"
#include "wvx/suffix_array.hpp"

namespace wvx {

std::uint64_t text_digest(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string doc_index::concatenate(const std::vector<std::string>& docs) {
    std::string text;
    std::size_t total = 0;
    for (auto& d : docs) total += d.size() + 1;
    text.reserve(total);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (docs[d].find('\0') != std::string::npos)
            throw sentinel_collision("document " + std::to_string(d + 1) + " contains the reserved byte 0x00 at offset " +
                                     std::to_string(docs[d].find('\0')));
        text += docs[d];
        text += '\0';
    }
    return text;
}

doc_index::doc_index(const std::vector<std::string>& docs) : m_(docs.size()) {
    if (docs.empty()) throw std::invalid_argument("doc_index: empty collection");
    text_ = concatenate(docs);
    n_ = text_.size();
    digest_ = text_digest(text_);

    // Terminator number d gets rank d-1; byte b gets rank m + b.
    std::vector<std::uint32_t> mapped(n_);
    std::vector<std::size_t> starts;
    std::size_t d = 0;
    starts.push_back(1);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto c = static_cast<unsigned char>(text_[i]);
        if (c == 0) {
            mapped[i] = static_cast<std::uint32_t>(d++);
            if (i + 1 < n_) starts.push_back(i + 2);
        } else {
            mapped[i] = static_cast<std::uint32_t>(m_ + c);
        }
    }
    sa_ = suffix_array(mapped, static_cast<std::uint32_t>(m_ + 256));
    starts_ = sparse_bit_vector(starts, n_);

    std::vector<symbol_t> da(n_);
    for (std::size_t i = 0; i < n_; ++i) da[i] = starts_.rank1(sa_[i] + 1);
    da_ = wavelet_tree(da, m_);
}

void doc_index::attach_text(const std::vector<std::string>& docs) {
    auto text = concatenate(docs);
    if (docs.size() != m_ || text.size() != n_ || text_digest(text) != digest_)
        throw std::invalid_argument("attach_text: collection does not match the indexed one");
    text_ = std::move(text);
}

void doc_index::check_pattern(std::string_view q) const {
    if (q.empty()) throw std::invalid_argument("pattern must be non-empty");
    if (q.find('\0') != std::string_view::npos) throw sentinel_collision("pattern contains the reserved byte 0x00");
    if (!has_text()) throw text_unavailable("index was saved without text; attach the corpus to search patterns");
}

int doc_index::compare_prefix(std::uint64_t start, std::string_view q) const {
    const std::size_t avail = n_ - start;
    const std::size_t len = std::min(avail, q.size());
    for (std::size_t k = 0; k < len; ++k) {
        const auto a = static_cast<unsigned char>(text_[start + k]), b = static_cast<unsigned char>(q[k]);
        if (a != b) return a < b ? -1 : 1;
    }
    return len == q.size() ? 0 : -1;
}

interval doc_index::pattern_search(std::string_view q) const {
    check_pattern(q);
    auto lo = std::partition_point(sa_.begin(), sa_.end(), [&](std::uint64_t s) { return compare_prefix(s, q) < 0; });
    auto hi = std::partition_point(lo, sa_.end(), [&](std::uint64_t s) { return compare_prefix(s, q) == 0; });
    if (lo == hi) return {};
    return {static_cast<std::size_t>(lo - sa_.begin()) + 1, static_cast<std::size_t>(hi - sa_.begin())};
}

std::size_t doc_index::doc_of(std::size_t p) const {
    if (p == 0 || p > n_) throw std::out_of_range("doc_of: position outside the collection");
    return starts_.rank1(p);
}

std::size_t doc_index::doc_start(std::size_t d) const {
    if (d == 0 || d > m_) throw std::out_of_range("doc_start: no document " + std::to_string(d));
    return *starts_.select1(d);
}

std::size_t doc_index::doc_length(std::size_t d) const {
    const std::size_t end = d == m_ ? n_ + 1 : doc_start(d + 1);
    return end - doc_start(d) - 1;
}

report_stream doc_index::dlist_stream(std::string_view q, std::size_t dmin, std::size_t dmax) const {
    auto r = pattern_search(q);
    return da_.report_stream_of(r.lo, r.hi, dmin, std::min(dmax, m_));
}

std::vector<symbol_count> doc_index::dlist(std::string_view q, std::size_t dmin, std::size_t dmax) const {
    std::vector<symbol_count> out;
    auto s = dlist_stream(q, dmin, dmax);
    while (auto hit = s.next()) out.push_back(*hit);
    return out;
}

std::size_t doc_index::dfreq(std::string_view q, std::size_t d) const {
    if (d == 0 || d > m_) throw std::out_of_range("dfreq: no document " + std::to_string(d));
    auto r = pattern_search(q);
    if (r.empty()) return 0;
    return da_.rank(d, r.hi) - da_.rank(d, r.lo - 1);
}

std::vector<doc_hit> doc_index::dint(const std::vector<std::string>& patterns, std::size_t t, std::size_t dmin,
                                     std::size_t dmax) const {
    std::vector<interval> ranges;
    for (auto& q : patterns) ranges.push_back(pattern_search(q));
    std::vector<doc_hit> out;
    if (dmin > dmax || dmin > m_) return out;
    rint(da_, ranges, t, dmin, std::min(dmax, m_),
         [&](const rint_hit& h) { out.push_back({static_cast<std::size_t>(h.symbol), h.freqs}); });
    return out;
}

std::size_t doc_index::size_in_bits() const {
    return 64 * sa_.size() + da_.level_bits() + da_.aux_bits() + starts_.size_in_bits();
}

void doc_index::save(std::ostream& out, bool store_text) const {
    io::put_magic(out, "WDOC");
    io::put_u64(out, m_);
    io::put_u64(out, n_);
    io::put_u64(out, digest_);
    io::put_u64(out, store_text ? 1 : 0);
    if (store_text) io::put_bytes(out, text_);
    io::put_words(out, sa_);
    da_.save(out);
    starts_.save(out);
}

doc_index doc_index::load(std::istream& in) {
    io::expect_magic(in, "WDOC");
    doc_index x;
    x.m_ = io::get_u64(in);
    x.n_ = io::get_u64(in);
    x.digest_ = io::get_u64(in);
    const auto flags = io::get_u64(in);
    if (flags > 1) throw io::format_error("doc index: unknown flags");
    if (flags & 1) {
        x.text_ = io::get_bytes(in);
        if (x.text_.size() != x.n_ || text_digest(x.text_) != x.digest_)
            throw io::format_error("doc index: stored text does not match its digest");
    }
    x.sa_ = io::get_words(in);
    x.da_ = wavelet_tree::load(in);
    x.starts_ = sparse_bit_vector::load(in);
    if (x.sa_.size() != x.n_ || x.da_.size() != x.n_ || x.starts_.size() != x.n_ || x.starts_.ones() != x.m_)
        throw io::format_error("doc index: inconsistent section sizes");
    for (auto s : x.sa_)
        if (s >= x.n_) throw io::format_error("doc index: suffix array entry out of range");
    return x;
}

}  // namespace wvx
