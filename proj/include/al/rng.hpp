#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace al {

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Folds a key tuple into one seed. Streams keyed on distinct tuples are
/// independent of scheduling, which keeps results identical across worker counts.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto k : keys) h = mix64(h ^ mix64(k));
    return h;
}

inline Rng make_rng(std::initializer_list<std::uint64_t> keys) { return Rng{derive_seed(keys)}; }

// FNV-1a
constexpr std::uint64_t hash_name(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stream salts, so that e.g. the split stream never coincides with a strategy stream.
namespace salt {
inline constexpr std::uint64_t split = 0x5317;
inline constexpr std::uint64_t select = 0x5e1e;
inline constexpr std::uint64_t committee = 0xc0bc;
inline constexpr std::uint64_t landscape = 0x1a4d;
inline constexpr std::uint64_t blobs = 0xb10b;
}  // namespace salt

}  // namespace al
