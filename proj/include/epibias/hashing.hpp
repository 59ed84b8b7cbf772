#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace epibias {

// 64-bit FNV-1a. Used for fixture keys and document ids; not cryptographic.
std::uint64_t fnv1a64(std::string_view data);

// 16 lowercase hex digits of fnv1a64(data).
std::string hash_hex(std::string_view data);

// Lowercase, trim, collapse internal whitespace runs to a single space.
std::string normalize_text(std::string_view text);

// Deterministic value in [0, 1) derived from a key; used by fixture synthesis.
double unit_hash(std::string_view key);

}  // namespace epibias
