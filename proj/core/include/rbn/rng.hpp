#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace rbn {

// Counter-based random streams (Philox4x32-10). Every draw is a pure function
// of (master seed, stream domain, three 32/64-bit indices), so results are
// independent of worker count and evaluation order.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint64_t M0 = 0xD2511F53ull;
    constexpr std::uint64_t M1 = 0xCD9E8D57ull;
    const std::uint64_t p0 = M0 * c[0];
    const std::uint64_t p1 = M1 * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

} // namespace detail

// Domain tags keep unrelated consumers of the same master seed uncorrelated.
enum class StreamDomain : std::uint64_t {
    ou_noise = 1,
    ou_marginal = 2,
    scan_points = 3,
    martingale = 4,
    path_members = 5,
    drift_cells = 6,
};

// One 128-bit Philox block: 4 x 32 bits of output for counter (a, b, c).
inline std::array<std::uint32_t, 4> philox_block(std::uint64_t seed, StreamDomain domain,
                                                 std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const std::uint64_t key = detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(domain)));
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    // 128-bit counter from the three indices (b and c get 32 bits each).
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(a),
        static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b) ^ static_cast<std::uint32_t>(b >> 32),
        static_cast<std::uint32_t>(c) ^ static_cast<std::uint32_t>(c >> 32),
    };
    constexpr std::uint32_t W0 = 0x9E3779B9u;
    constexpr std::uint32_t W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        detail::philox_round(ctr, k0, k1);
        k0 += W0;
        k1 += W1;
    }
    return ctr;
}

// Uniform double in [0, 1) from two 32-bit words (53 mantissa bits).
inline double uniform_from(std::uint32_t w0, std::uint32_t w1) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(w0) << 32) | w1;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, StreamDomain domain,
                        std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const auto w = philox_block(seed, domain, a, b, c);
    return uniform_from(w[0], w[1]);
}

// Symmetric uniform in [-1, 1).
inline double uniform_sym(std::uint64_t seed, StreamDomain domain,
                          std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return 2.0 * uniform01(seed, domain, a, b, c) - 1.0;
}

// Standard normal via Box-Muller on one Philox block.
inline double normal(std::uint64_t seed, StreamDomain domain,
                     std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const auto w = philox_block(seed, domain, a, b, c);
    const double u1 = 1.0 - uniform_from(w[0], w[1]); // (0, 1]
    const double u2 = uniform_from(w[2], w[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Deterministic +/-1 from a block, used by the cell-hashed drift family.
inline double sign_hash(std::uint64_t seed, StreamDomain domain,
                        std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const auto w = philox_block(seed, domain, a, b, c);
    return (w[0] & 1u) ? 1.0 : -1.0;
}

} // namespace rbn
