#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wvx/range_ops.hpp"
#include "wvx/sparse_bit_vector.hpp"
#include "wvx/wavelet_tree.hpp"

namespace wvx {

// A document contains the reserved terminator byte 0x00.
struct sentinel_collision : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a query needs the text but the index was saved without it
// and nothing has been re-attached.
struct text_unavailable : std::logic_error {
    using std::logic_error::logic_error;
};

struct doc_hit {
    std::size_t doc;
    std::vector<std::size_t> freqs;  // one per pattern
    friend bool operator==(const doc_hit&, const doc_hit&) = default;
};

// Stable 64-bit FNV-1a digest, used to check re-attached text.
std::uint64_t text_digest(std::string_view s);

// Document retrieval over a collection D_1..D_m. The concatenation
// C = D_1 0 D_2 0 ... D_m 0 is indexed by a suffix array A, and the
// document array D[i] = doc(A[i]) is kept as a wavelet tree over [1, m].
// Terminators sort below every byte and among themselves by position.
class doc_index {
public:
    doc_index() = default;
    explicit doc_index(const std::vector<std::string>& docs);

    std::size_t docs() const { return m_; }
    std::size_t size() const { return n_; }  // |C| including terminators
    bool has_text() const { return !text_.empty() || n_ == 0; }
    std::uint64_t digest() const { return digest_; }
    // Re-attach the collection after loading a text-less index.
    void attach_text(const std::vector<std::string>& docs);

    // Suffix array interval of suffixes prefixed by q (1-based, may be empty).
    interval pattern_search(std::string_view q) const;
    std::size_t occurrences(std::string_view q) const { return pattern_search(q).length(); }
    // Document owning text position p (1-based).
    std::size_t doc_of(std::size_t p) const;
    std::size_t doc_start(std::size_t d) const;
    std::size_t doc_length(std::size_t d) const;

    // Distinct documents in [dmin, dmax] containing q, ascending, with tf.
    std::vector<symbol_count> dlist(std::string_view q, std::size_t dmin = 1, std::size_t dmax = SIZE_MAX) const;
    report_stream dlist_stream(std::string_view q, std::size_t dmin = 1, std::size_t dmax = SIZE_MAX) const;
    std::size_t dfreq(std::string_view q, std::size_t d) const;
    // Documents in [dmin, dmax] holding at least t of the patterns.
    std::vector<doc_hit> dint(const std::vector<std::string>& patterns, std::size_t t, std::size_t dmin = 1,
                              std::size_t dmax = SIZE_MAX) const;

    const wavelet_tree& doc_array() const { return da_; }
    std::uint64_t suffix(std::size_t i) const { return sa_.at(i - 1) + 1; }
    std::size_t size_in_bits() const;

    void save(std::ostream& out, bool store_text) const;
    static doc_index load(std::istream& in);

private:
    static std::string concatenate(const std::vector<std::string>& docs);
    void check_pattern(std::string_view q) const;
    // Compare the suffix at 0-based text offset `start` with q on |q| bytes.
    int compare_prefix(std::uint64_t start, std::string_view q) const;

    std::size_t m_ = 0, n_ = 0;
    std::string text_;
    std::uint64_t digest_ = 0;
    std::vector<std::uint64_t> sa_;
    wavelet_tree da_;
    sparse_bit_vector starts_;
};

}  // namespace wvx
