#ifndef DYNHEAT_RNG_HPP_
#define DYNHEAT_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dynheat {

// splitmix64 step; used to derive independent substreams from a root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic named substream: every (seed, id...) tuple yields the same
// generator regardless of thread scheduling.
inline std::mt19937_64 substream(std::uint64_t root,
                                 std::initializer_list<std::uint64_t> ids) {
    std::uint64_t s = root;
    std::uint64_t h = splitmix64(s);
    for (std::uint64_t id : ids) {
        s ^= id + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
        h ^= splitmix64(s);
    }
    return std::mt19937_64(h);
}

}  // namespace dynheat

#endif  // DYNHEAT_RNG_HPP_
