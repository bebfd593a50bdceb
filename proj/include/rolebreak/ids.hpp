#pragma once
// Content-derived stable identifiers.
//
// Every persistent record id is a hash of its identifying content, so
// re-running generation over the same inputs never duplicates records.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace rolebreak {

inline uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ull) {
    uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Hash of several fields, separated by a byte that cannot occur in text fields.
inline uint64_t fnv1a64_fields(std::initializer_list<std::string_view> fields) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& f : fields) {
        h = fnv1a64(f, h);
        h ^= 0x1f;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex_digits(uint64_t value, int width) {
    static const char* digits = "0123456789abcdef";
    std::string out(static_cast<size_t>(width), '0');
    for (int i = width - 1; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

inline std::string make_role_id(std::string_view canonical_name) {
    return hex_digits(fnv1a64_fields({"role", canonical_name}), 16);
}

inline std::string make_query_id(std::string_view role_id, std::string_view pattern,
                                 std::string_view text) {
    return hex_digits(fnv1a64_fields({"query", role_id, pattern, text}), 16);
}

inline std::string make_transcript_id(std::string_view query_id, std::string_view strategy_label) {
    return hex_digits(fnv1a64_fields({"transcript", query_id, strategy_label}), 16);
}

// Per-record RNG seeds derived from a campaign seed plus identifying strings.
inline uint32_t derive_seed(uint64_t base_seed, std::initializer_list<std::string_view> parts) {
    uint64_t h = fnv1a64(hex_digits(base_seed, 16));
    for (const auto& p : parts) {
        h = fnv1a64(p, h);
        h ^= 0x1f;
        h *= 0x100000001b3ull;
    }
    return static_cast<uint32_t>(h ^ (h >> 32));
}

}  // namespace rolebreak
