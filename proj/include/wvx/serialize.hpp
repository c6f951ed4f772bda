#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wvx::io {

// Thrown for truncated or inconsistent binary input.
struct format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All integers are written as 64-bit little-endian regardless of host order.
inline void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
    out.write(buf, 8);
}

inline std::uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (in.gcount() != 8) throw format_error("unexpected end of input");
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | buf[b];
    return v;
}

inline void put_words(std::ostream& out, const std::vector<std::uint64_t>& words) {
    put_u64(out, words.size());
    for (auto w : words) put_u64(out, w);
}

inline std::vector<std::uint64_t> get_words(std::istream& in) {
    auto count = get_u64(in);
    std::vector<std::uint64_t> words;
    words.reserve(count < (1u << 20) ? count : (1u << 20));
    for (std::uint64_t i = 0; i < count; ++i) words.push_back(get_u64(in));
    return words;
}

inline void put_bytes(std::ostream& out, std::string_view s) {
    put_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_bytes(std::istream& in) {
    auto len = get_u64(in);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (static_cast<std::uint64_t>(in.gcount()) != len) throw format_error("unexpected end of input");
    return s;
}

inline void put_magic(std::ostream& out, std::string_view magic) {
    out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void expect_magic(std::istream& in, std::string_view magic) {
    std::string got(magic.size(), '\0');
    in.read(got.data(), static_cast<std::streamsize>(magic.size()));
    if (got != magic) throw format_error("bad magic, expected " + std::string(magic));
}

}  // namespace wvx::io
