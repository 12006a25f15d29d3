#pragma once
// Counter-based deterministic randomness. Every draw is a pure function of
// (seed, tags...), so streams can be regenerated at any point without state.

#include <cmath>
#include <cstdint>

namespace mirec::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ b);
}

template <typename... Rest>
inline constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) {
    return mix(mix(a, b), static_cast<std::uint64_t>(rest)...);
}

// Uniform in [0, 1).
inline double u01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe as a log() argument.
inline double u01_open(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two derived uniforms.
inline double gaussian(std::uint64_t key) {
    const double u1 = u01_open(splitmix64(key ^ 0x5bf0364c355bb1a1ULL));
    const double u2 = u01(splitmix64(key ^ 0x27220a95fe1cb6f3ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline bool bernoulli(std::uint64_t key, double p) {
    return u01(splitmix64(key)) < p;
}

}  // namespace mirec::rng
