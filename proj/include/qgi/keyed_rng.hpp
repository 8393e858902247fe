#pragma once

#include <cstdint>
#include <initializer_list>

namespace qgi {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Counter-based stream: the value for a key tuple depends only on the tuple, never on
/// how many other draws happened before it.
constexpr std::uint64_t keyed_draw(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t c : counters) h = mix64(h ^ c);
    return h;
}

}  // namespace qgi
