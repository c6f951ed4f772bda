#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wvx {

// Suffix array of an integer string by prefix doubling with radix passes,
// O(n log n). Symbols must lie in [0, alphabet). Returns 0-based starts.
std::vector<std::uint64_t> suffix_array(std::span<const std::uint32_t> text, std::uint32_t alphabet);

}  // namespace wvx
