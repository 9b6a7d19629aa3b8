#pragma once

// Bit-level helpers shared by every module: points of the hypercube and
// subsets of coordinates are both stored as 64-bit masks.
//
// Convention: bit j (0-indexed) of a point encodes x_{j+1}; a clear bit is
// +1 and a set bit is -1. Coordinate sets use the same bit positions, so the
// character chi_S(x) is (-1)^popcount(S & x).

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace junta {

using Mask = std::uint64_t;

/// Arity limit for any function handled by the library (points are masks).
inline constexpr int kMaxArity = 63;

inline constexpr Mask low_bits(int n) {
    return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1);
}

inline constexpr Mask bit(int j) { return Mask{1} << j; }

inline int popcount(Mask m) { return std::popcount(m); }

/// chi_S(x) as +1 / -1.
inline int character(Mask set, Mask point) {
    return (std::popcount(set & point) & 1) ? -1 : 1;
}

/// sgn with the convention sgn(0) = +1.
inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

/// Gathers the bits of `value` selected by `select` into the low bits of the
/// result, preserving order (software pext).
inline Mask compress_bits(Mask value, Mask select) {
    Mask out = 0;
    int pos = 0;
    while (select) {
        const Mask low = select & (~select + 1);
        if (value & low) out |= bit(pos);
        ++pos;
        select ^= low;
    }
    return out;
}

/// Inverse of compress_bits: scatters the low bits of `value` onto the
/// positions of `select` (software pdep).
inline Mask expand_bits(Mask value, Mask select) {
    Mask out = 0;
    int pos = 0;
    while (select) {
        const Mask low = select & (~select + 1);
        if (value & bit(pos)) out |= low;
        ++pos;
        select ^= low;
    }
    return out;
}

/// Positions of the set bits, ascending.
inline std::vector<int> bit_positions(Mask m) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(std::popcount(m)));
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

/// Next mask with the same popcount (Gosper's hack). Caller checks bounds.
inline Mask next_same_popcount(Mask v) {
    const Mask t = v | (v - 1);
    return (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
}

/// All size-`size` subsets of {0..n-1}, in increasing mask order.
inline std::vector<Mask> subsets_of_size(int n, int size) {
    std::vector<Mask> out;
    if (size < 0 || size > n) return out;
    if (size == 0) {
        out.push_back(0);
        return out;
    }
    const Mask limit = bit(n);
    for (Mask v = low_bits(size); v < limit; v = next_same_popcount(v)) out.push_back(v);
    return out;
}

/// All size-`size` subsets of the set bits of `pool`, as masks over the same
/// coordinates, in lexicographic order of the compressed representation.
inline std::vector<Mask> subsets_of_size_within(Mask pool, int size) {
    const int n = std::popcount(pool);
    std::vector<Mask> out;
    for (Mask local : subsets_of_size(n, size)) out.push_back(expand_bits(local, pool));
    return out;
}

inline double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    r = std::min(r, n - r);
    double v = 1.0;
    for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return std::round(v);
}

/// Formats a mask as a 1-based coordinate list, e.g. "{1,3}".
inline std::string format_set(Mask m) {
    std::string s = "{";
    bool first = true;
    for (int j : bit_positions(m)) {
        if (!first) s += ',';
        s += std::to_string(j + 1);
        first = false;
    }
    return s + "}";
}

// ---------------------------------------------------------------------------
// Seeds and randomness.
//
// Every randomized operation takes an explicit 64-bit seed. Sub-streams are
// derived with derive_seed(parent, tag...), a splitmix64 chain; the result
// depends only on the parent seed and the tags, never on evaluation order.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
    return splitmix64(splitmix64(parent) ^ (tag * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

template <typename... Tags>
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag, Tags... rest) {
    return derive_seed(derive_seed(parent, tag), static_cast<std::uint64_t>(rest)...);
}

/// FNV-1a, used to turn phase names into seed tags.
inline constexpr std::uint64_t name_tag(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{splitmix64(seed)}; }

/// Uniform double in [0, 1) from 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform point of {+-1}^n.
inline Mask random_point(Rng& rng, int n) { return rng() & low_bits(n); }

/// Each coordinate of `universe` kept independently with probability p.
inline Mask random_subset(Rng& rng, Mask universe, double p) {
    if (p >= 1.0) return universe;
    Mask out = 0;
    for (Mask u = universe; u; u &= u - 1) {
        if (uniform01(rng) < p) out |= u & (~u + 1);
    }
    return out;
}

}  // namespace junta
