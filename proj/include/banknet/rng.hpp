#ifndef BANKNET_RNG_HPP
#define BANKNET_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace banknet {

// All randomness in the library flows through these helpers so that a fixed
// seed gives bit-identical results regardless of platform stdlib. std
// distributions are implementation-defined, so we draw uniforms by hand.

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a list of
// component tags (purpose id, epoch, item index, ...).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = splitmix64(base);
    for (std::uint64_t p : parts) s = splitmix64(s ^ p);
    return s;
}

// Stream tags; values are arbitrary but fixed forever.
namespace stream {
inline constexpr std::uint64_t kInit = 0x1a2b3c4d00000001ULL;
inline constexpr std::uint64_t kShuffle = 0x1a2b3c4d00000002ULL;
inline constexpr std::uint64_t kDropout = 0x1a2b3c4d00000003ULL;
inline constexpr std::uint64_t kAugment = 0x1a2b3c4d00000004ULL;
inline constexpr std::uint64_t kGenerator = 0x1a2b3c4d00000005ULL;
inline constexpr std::uint64_t kSplit = 0x1a2b3c4d00000006ULL;
} // namespace stream

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    return Rng(derive_seed(base, parts));
}

// Uniform double in [0, 1), 53 bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + uniform01(rng) * (hi - lo);
}

// Inclusive integer range. Modulo bias is negligible for the ranges used here.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

// Fisher-Yates; std::shuffle's draw sequence is unspecified by the standard.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace banknet

#endif
