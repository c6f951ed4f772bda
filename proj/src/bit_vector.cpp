#include "wvx/bit_vector.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "wvx/serialize.hpp"

namespace wvx {

namespace {

constexpr std::uint64_t kAuxStored = 1;

std::size_t select_in_word(std::uint64_t x, std::size_t r) {
    for (std::size_t k = 1; k < r; ++k) x &= x - 1;
    return static_cast<std::size_t>(std::countr_zero(x));
}

}  // namespace

bit_vector::bit_vector(const std::vector<bool>& bits) : words_((bits.size() + 63) / 64, 0), len_(bits.size()) {
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) words_[i / 64] |= std::uint64_t{1} << (i % 64);
    build_index();
}

bit_vector::bit_vector(std::vector<std::uint64_t> words, std::size_t len) : words_(std::move(words)), len_(len) {
    if (words_.size() < (len_ + 63) / 64) throw std::invalid_argument("bit_vector: too few words for length");
    words_.resize((len_ + 63) / 64);
    build_index();
}

bit_vector bit_vector::from_string(std::string_view bits) {
    bit_vector_builder b;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit_vector: expected only '0' and '1'");
        b.push_back(c == '1');
    }
    return std::move(b).build();
}

void bit_vector::build_index() {
    if (len_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (len_ % 64)) - 1;
    ones_ = 0;
    for (auto w : words_) ones_ += static_cast<std::size_t>(std::popcount(w));

    samples_.clear();
    if (len_ <= kSuperBits) return;
    const std::size_t supers = (words_.size() + kWordsPerSuper - 1) / kWordsPerSuper;
    samples_.resize(2 * supers, 0);
    std::size_t absolute = 0;
    for (std::size_t s = 0; s < supers; ++s) {
        samples_[2 * s] = absolute;
        std::uint64_t packed = 0;
        std::size_t rel = 0;
        for (std::size_t k = 0; k < kWordsPerSuper; ++k) {
            std::size_t w = s * kWordsPerSuper + k;
            if (k > 0) packed |= static_cast<std::uint64_t>(rel) << (9 * (k - 1));
            if (w < words_.size()) rel += static_cast<std::size_t>(std::popcount(words_[w]));
        }
        samples_[2 * s + 1] = packed;
        absolute += rel;
    }
}

bool bit_vector::access(std::size_t i) const {
    if (i == 0 || i > len_) throw std::out_of_range("bit_vector::access: position " + std::to_string(i));
    --i;
    return (words_[i / 64] >> (i % 64)) & 1u;
}

std::size_t bit_vector::rank1(std::size_t i) const {
    if (i > len_) throw std::out_of_range("bit_vector::rank1: position " + std::to_string(i));
    return rank1_unchecked(i);
}

std::size_t bit_vector::rank1_unchecked(std::size_t i) const {
    if (i == len_) return ones_;
    const std::size_t w = i / 64;
    const std::size_t r = i % 64;
    std::size_t count = 0;
    if (samples_.empty()) {
        for (std::size_t k = 0; k < w; ++k) count += static_cast<std::size_t>(std::popcount(words_[k]));
    } else {
        const std::size_t s = w / kWordsPerSuper;
        const std::size_t k = w % kWordsPerSuper;
        count = samples_[2 * s];
        if (k > 0) count += (samples_[2 * s + 1] >> (9 * (k - 1))) & 0x1FF;
    }
    if (r > 0) count += static_cast<std::size_t>(std::popcount(words_[w] & ((std::uint64_t{1} << r) - 1)));
    return count;
}

template <bool Ones>
std::optional<std::size_t> bit_vector::select_impl(std::size_t j) const {
    const std::size_t total = Ones ? ones_ : len_ - ones_;
    if (j == 0 || j > total) return std::nullopt;

    auto word_bits = [&](std::size_t w) { return Ones ? words_[w] : ~words_[w]; };

    std::size_t w = 0;
    std::size_t before = 0;  // matching bits in words [0, w)
    if (samples_.empty()) {
        for (;; ++w) {
            auto c = static_cast<std::size_t>(std::popcount(word_bits(w)));
            if (before + c >= j) break;
            before += c;
        }
    } else {
        const std::size_t supers = samples_.size() / 2;
        auto super_before = [&](std::size_t s) {
            std::size_t abs = samples_[2 * s];
            return Ones ? abs : s * kSuperBits - abs;
        };
        // Largest superblock whose prefix count is < j.
        std::size_t lo = 0, hi = supers - 1;
        while (lo < hi) {
            std::size_t mid = lo + (hi - lo + 1) / 2;
            if (super_before(mid) < j) lo = mid;
            else hi = mid - 1;
        }
        const std::size_t s = lo;
        const std::size_t base = super_before(s);
        const std::uint64_t packed = samples_[2 * s + 1];
        std::size_t k = 0;
        for (std::size_t cand = 1; cand < kWordsPerSuper && s * kWordsPerSuper + cand < words_.size(); ++cand) {
            std::size_t rel = (packed >> (9 * (cand - 1))) & 0x1FF;
            if (!Ones) rel = cand * 64 - rel;
            if (base + rel < j) k = cand;
            else break;
        }
        w = s * kWordsPerSuper + k;
        std::size_t rel = k == 0 ? 0 : (packed >> (9 * (k - 1))) & 0x1FF;
        before = base + (Ones ? rel : k * 64 - rel);
    }
    return w * 64 + select_in_word(word_bits(w), j - before) + 1;
}

std::optional<std::size_t> bit_vector::select1(std::size_t j) const { return select_impl<true>(j); }
std::optional<std::size_t> bit_vector::select0(std::size_t j) const { return select_impl<false>(j); }

std::string bit_vector::to_string() const {
    std::string s;
    s.reserve(len_);
    for (std::size_t i = 0; i < len_; ++i) s.push_back((words_[i / 64] >> (i % 64)) & 1u ? '1' : '0');
    return s;
}

void bit_vector::save(std::ostream& out) const {
    io::put_u64(out, kAuxStored);
    io::put_u64(out, len_);
    io::put_words(out, words_);
    io::put_words(out, samples_);
}

bit_vector bit_vector::load(std::istream& in) {
    const auto flags = io::get_u64(in);
    const auto len = io::get_u64(in);
    auto words = io::get_words(in);
    if (words.size() != (len + 63) / 64) throw io::format_error("bit_vector: word count does not match length");
    bit_vector bv;
    bv.words_ = std::move(words);
    bv.len_ = len;
    if (flags & kAuxStored) {
        bv.samples_ = io::get_words(in);
        bv.ones_ = 0;
        for (auto w : bv.words_) bv.ones_ += static_cast<std::size_t>(std::popcount(w));
        const std::size_t supers = (bv.words_.size() + kWordsPerSuper - 1) / kWordsPerSuper;
        if (!bv.samples_.empty() && bv.samples_.size() != 2 * supers)
            throw io::format_error("bit_vector: rank sample count mismatch");
        if (bv.samples_.empty() != (len <= kSuperBits)) bv.build_index();
    } else {
        bv.build_index();
    }
    return bv;
}

}  // namespace wvx
