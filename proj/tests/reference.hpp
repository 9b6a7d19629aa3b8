#pragma once

// Brute-force reference computations for the tests. Deliberately naive and
// independent of the library kernels: plain loops over points, no WHT, no
// bit-compression helpers.

#include <cmath>
#include <cstdint>
#include <vector>

#include "junta/boolfn.hpp"

namespace ref {

using Table = std::vector<double>;  // index v, bit j of v is x_{j+1}, 0 -> +1

inline int bitcount(std::uint64_t v) {
    int c = 0;
    for (; v; v >>= 1) c += static_cast<int>(v & 1);
    return c;
}

inline double chi(std::uint64_t s, std::uint64_t x) { return (bitcount(s & x) % 2) ? -1.0 : 1.0; }

inline Table table_of(const junta::BooleanFunction& f) {
    Table t;
    for (auto v : f.table()) t.push_back(v);
    return t;
}

inline double coefficient(const Table& f, std::uint64_t s) {
    double sum = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) sum += f[x] * chi(s, x);
    return sum / static_cast<double>(f.size());
}

inline Table spectrum(const Table& f) {
    Table out(f.size());
    for (std::uint64_t s = 0; s < f.size(); ++s) out[s] = coefficient(f, s);
    return out;
}

/// f_avg,T(x): mean of f over the points agreeing with x on T.
inline double average_on(const Table& f, std::uint64_t t, std::uint64_t x) {
    double sum = 0.0;
    int count = 0;
    for (std::uint64_t y = 0; y < f.size(); ++y) {
        if ((y & t) == (x & t)) {
            sum += f[y];
            ++count;
        }
    }
    return sum / count;
}

inline double corr_on(const Table& f, std::uint64_t t) {
    double total = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) total += std::abs(average_on(f, t, x));
    return total / static_cast<double>(f.size());
}

inline int arity(const Table& f) {
    int n = 0;
    while ((std::size_t{1} << n) < f.size()) ++n;
    return n;
}

/// min over |T| = k of (1 - corr_on(T)) / 2, via completions.
inline double distance_to_juntas(const Table& f, int k) {
    const int n = arity(f);
    double best = -1.0;
    for (std::uint64_t t = 0; t < f.size(); ++t) {
        if (bitcount(t) != std::min(k, n)) continue;
        best = std::max(best, corr_on(f, t));
    }
    return (1.0 - best) / 2.0;
}

inline double subset_mass(const Table& f, int k) {
    const Table spec = spectrum(f);
    double best = 0.0;
    for (std::uint64_t t = 0; t < f.size(); ++t) {
        if (bitcount(t) > k) continue;
        double m = 0.0;
        for (std::uint64_t s = 0; s < f.size(); ++s) {
            if ((s & ~t) == 0) m += spec[s] * spec[s];
        }
        best = std::max(best, m);
    }
    return best;
}

/// Coefficient at S of f restricted to live set J with the rest fixed to z.
inline double restricted_coefficient(const Table& f, std::uint64_t j, std::uint64_t z,
                                     std::uint64_t s) {
    double sum = 0.0;
    int count = 0;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        if ((x & ~j) != (z & ~j)) continue;
        sum += f[x] * chi(s, x);
        ++count;
    }
    return sum / count;
}

/// E over a p-random restriction of the squared coefficient at U, by exact
/// enumeration of every (J, z).
inline double restriction_average(const Table& f, std::uint64_t u, double p) {
    const int n = arity(f);
    const std::uint64_t all = f.size() - 1;
    double total = 0.0;
    for (std::uint64_t j = 0; j <= all; ++j) {
        if ((u & ~j) != 0) continue;
        const int live = bitcount(j);
        const double pj = std::pow(p, live) * std::pow(1.0 - p, n - live);
        if (pj == 0.0) continue;
        double inner = 0.0;
        int zs = 0;
        for (std::uint64_t z = 0; z <= all; ++z) {
            if (z & j) continue;
            const double c = restricted_coefficient(f, j, z, u);
            inner += c * c;
            ++zs;
        }
        total += pj * inner / zs;
    }
    return total;
}

/// lambda_U as a sum over levels of restriction averages (p^d keep rates).
inline double lambda_by_restrictions(const Table& f, std::uint64_t u, double p, int levels) {
    double total = 0.0;
    for (int d = 0; d < levels; ++d) total += restriction_average(f, u, std::pow(p, d));
    return total;
}

}  // namespace ref
