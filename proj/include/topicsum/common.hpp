#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace topicsum {

inline constexpr const char* kVersion = "0.1.0";

// Invalid or inconsistent inputs (bad records, shape mismatches, contract
// violations). Subcommands map these to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed serialized data; carries the offending line when known.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg), line(0) {}
    ParseError(const std::string& msg, std::size_t line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    std::size_t line;
};

// FNV-1a, the hash behind deterministic corpus splitting and config digests.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Finalizer mixing all input bits into all output bits; FNV-1a alone leaves
// weak high bits on short keys.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

// Maps a hash to [0, 1).
inline double hash_to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // 53 bits / 2^53
}

}  // namespace topicsum
