#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wvx/bit_vector.hpp"
#include "wvx/doc_index.hpp"
#include "wvx/range_ops.hpp"
#include "wvx/sparse_bit_vector.hpp"
#include "wvx/wavelet_tree.hpp"

namespace wvx {

// Lowercased runs of ASCII letters and digits.
std::vector<std::string> tokenize(std::string_view text);

// term -> stem key. Terms missing from the map are their own key.
using stem_map = std::map<std::string, std::string>;
// Lines of "term stem" separated by whitespace; '#' starts a comment.
stem_map parse_stem_map(std::string_view text);

// Terms ordered by (stem key, term), so every stem group is a contiguous
// id range. Ids are 1-based.
class vocabulary {
public:
    vocabulary() = default;
    vocabulary(std::vector<std::string> terms, const stem_map& stems = {});

    std::size_t size() const { return terms_.size(); }
    const std::string& term(std::size_t t) const { return terms_.at(t - 1); }
    const std::string& key(std::size_t t) const { return keys_.at(t - 1); }
    bool has_stem_map() const { return stemmed_; }
    std::optional<std::size_t> find(std::string_view term) const;
    // Terms whose key equals `stem` when a stem map was given, otherwise
    // terms starting with `stem`.
    std::optional<std::pair<std::size_t, std::size_t>> stem_range(std::string_view stem) const;

    void save(std::ostream& out) const;
    static vocabulary load(std::istream& in);

private:
    std::vector<std::string> terms_, keys_;
    std::map<std::string, std::size_t, std::less<>> ids_;
    bool stemmed_ = false;
};

struct posting {
    std::size_t doc;
    std::size_t tf;
    friend bool operator==(const posting&, const posting&) = default;
};

// Contiguous id range of terms; a single term is [t, t].
struct term_range {
    std::size_t first, last;
    term_range(std::size_t t) : first(t), last(t) {}  // NOLINT: single terms convert implicitly
    term_range(std::size_t a, std::size_t b) : first(a), last(b) {}
};

class inv_index;

// Fingered cursor over the docid-ordered view of a term range. seek_rank
// takes non-decreasing ranks, seek_doc non-decreasing doc ids. Once a
// seek runs off the end the cursor stays exhausted.
class ft_iterator {
public:
    std::optional<std::size_t> seek_rank(std::size_t k);
    std::optional<std::pair<std::size_t, std::size_t>> seek_doc(std::size_t d);  // (doc, rank)
    bool exhausted() const { return exhausted_; }
    std::size_t size() const { return range_.length(); }

private:
    friend class inv_index;
    ft_iterator(const wavelet_tree& wt, interval range);

    interval range_;
    quantile_finger ranks_;
    rnv_finger docs_;
    std::optional<std::size_t> last_doc_;
    std::optional<std::pair<std::size_t, std::size_t>> last_hit_;
    bool exhausted_ = false;
};

// Postings of every term concatenated into L (each list by decreasing tf,
// ties by increasing doc), stored as a wavelet tree over doc ids [1, m].
// List starts are marked in an Elias-Fano bitmap. Per term t, T_t marks the
// distinct tf values in [1, max tf] and R_t marks the first entry of each
// tf run; the T_t are concatenated and R_t is kept aligned with L.
class inv_index {
public:
    inv_index() = default;
    inv_index(const std::vector<std::string>& docs, const stem_map& stems = {});
    // lists[t-1] holds the postings of term t of `vocab`, in any order.
    inv_index(vocabulary vocab, const std::vector<std::vector<posting>>& lists, std::size_t docs);

    std::size_t docs() const { return m_; }
    std::size_t terms() const { return vocab_.size(); }
    std::size_t size() const { return L_.size(); }
    std::size_t tokens() const { return tokens_; }
    const vocabulary& vocab() const { return vocab_; }
    const wavelet_tree& postings() const { return L_; }

    std::size_t list_start(std::size_t t) const;
    std::size_t df(std::size_t t) const;
    // Positions of L covered by the lists of terms first..last.
    interval span(term_range r) const;
    std::size_t distinct_tf(std::size_t t) const;  // v_t
    std::size_t max_tf(std::size_t t) const;       // m_t

    std::size_t tf_at(std::size_t t, std::size_t i) const;
    std::size_t lt_get(std::size_t t, std::size_t i) const;
    // Entries i..i2 of L_t, by increasing doc, with their tf.
    std::vector<posting> lt_segment(std::size_t t, std::size_t i, std::size_t i2, std::size_t dmin = 1,
                                    std::size_t dmax = SIZE_MAX) const;

    std::size_t ft_get(term_range r, std::size_t k) const;
    std::vector<std::size_t> ft_segment(term_range r, std::size_t k, std::size_t k2) const;
    ft_iterator ft_iter(term_range r) const;
    // Distinct docs of the merged lists with the number of terms holding each.
    std::vector<symbol_count> docs_of(term_range r, std::size_t dmin = 1, std::size_t dmax = SIZE_MAX) const;
    // Docs in at least `threshold` of the ranges; freqs count member terms.
    std::vector<doc_hit> intersect(const std::vector<term_range>& ranges, std::size_t threshold, std::size_t dmin = 1,
                                   std::size_t dmax = SIZE_MAX) const;

    std::vector<std::size_t> local_vocab(std::size_t d) const;
    // Offset of d inside L_t, if listed.
    std::optional<std::size_t> contains(std::size_t t, std::size_t d) const;
    std::size_t persin_prefix(std::size_t t, std::size_t f) const;
    // Merge L_t[1, persin_prefix(t, f)] into an accumulator sorted by doc.
    std::vector<posting> persin_round(const std::vector<posting>& acc, std::size_t t, std::size_t f) const;
    std::size_t sum_tf_stemmed(term_range r, std::size_t d) const;

    std::size_t size_in_bits() const;
    void save(std::ostream& out) const;
    static inv_index load(std::istream& in);

private:
    void build(const std::vector<std::vector<posting>>& lists);
    void check_term(std::size_t t) const;
    void check_range(term_range r) const;
    void check_doc(std::size_t d) const;
    std::size_t tf_start(std::size_t t) const;  // 1-based start of T_t inside the concatenation
    std::size_t run_of(std::size_t t, std::size_t i) const;

    vocabulary vocab_;
    std::size_t m_ = 0, tokens_ = 0;
    wavelet_tree L_;
    sparse_bit_vector starts_;     // s_t marked over [1, n]
    bit_vector runs_;              // R_t, aligned with L
    bit_vector tf_marks_;          // T_1 T_2 ... T_nu
    sparse_bit_vector tf_starts_;  // start of each T_t inside tf_marks_
};

}  // namespace wvx
