#include "junta/fourier.hpp"

#include <cmath>

#include "junta/errors.hpp"

namespace junta {

double FourierSpectrum::total_weight() const {
    double w = 0.0;
    for (double c : coeffs) w += c * c;
    return w;
}

void wht_butterfly(std::span<double> data) {
    const std::size_t size = data.size();
    for (std::size_t half = 1; half < size; half <<= 1) {
        for (std::size_t block = 0; block < size; block += half << 1) {
            for (std::size_t i = block; i < block + half; ++i) {
                const double a = data[i];
                const double b = data[i + half];
                data[i] = a + b;
                data[i + half] = a - b;
            }
        }
    }
}

FourierSpectrum wht(int n, std::vector<double> values) {
    if (n < 0 || n > 30 || values.size() != (std::size_t{1} << n)) {
        throw InputError("value table size must be 2^n");
    }
    wht_butterfly(values);
    const double scale = std::ldexp(1.0, -n);
    for (double& v : values) v *= scale;
    return FourierSpectrum{n, std::move(values)};
}

FourierSpectrum wht(const BooleanFunction& f) {
    if (!f.has_table()) throw UnsupportedError("exact transform needs a truth-table backing");
    return wht(f.arity(), f.values());
}

std::vector<double> inverse_wht(const FourierSpectrum& spec) {
    std::vector<double> v = spec.coeffs;
    wht_butterfly(v);
    return v;
}

double variance(const FourierSpectrum& spec) {
    return spec.total_weight() - spec.coeffs[0] * spec.coeffs[0];
}

namespace {

void check_coordinate(const FourierSpectrum& spec, int i) {
    if (i < 1 || i > spec.n) throw InputError("coordinate outside [1, n]");
}

}  // namespace

double influence(const FourierSpectrum& spec, int i, int level_cap) {
    check_coordinate(spec, i);
    const Mask b = bit(i - 1);
    double sum = 0.0;
    for (Mask s = 0; s < spec.size(); ++s) {
        if ((s & b) && popcount(s) <= level_cap) sum += spec.coeffs[s] * spec.coeffs[s];
    }
    return sum;
}

double norm_inf(const FourierSpectrum& spec, int i, int level_cap) {
    check_coordinate(spec, i);
    const Mask b = bit(i - 1);
    double sum = 0.0;
    for (Mask s = 0; s < spec.size(); ++s) {
        const int size = popcount(s);
        if ((s & b) && size <= level_cap) sum += spec.coeffs[s] * spec.coeffs[s] / size;
    }
    return sum;
}

double norm_inf_set(const FourierSpectrum& spec, Mask u, int level_cap) {
    if (u == 0) throw InputError("normalized influence of a set needs a nonempty set");
    if (u & ~low_bits(spec.n)) throw InputError("set exceeds arity");
    const int usize = popcount(u);
    // Walk supersets of u: s = u | (free submask).
    const Mask free = low_bits(spec.n) & ~u;
    double sum = 0.0;
    Mask sub = free;
    while (true) {
        const Mask s = u | sub;
        const int size = popcount(s);
        if (size <= level_cap) sum += spec.coeffs[s] * spec.coeffs[s] / binomial(size, usize);
        if (sub == 0) break;
        sub = (sub - 1) & free;
    }
    return sum;
}

FourierSpectrum noise_op(const FourierSpectrum& spec, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw InputError("noise rate rho must lie in [-1, 1]");
    std::vector<double> powers(static_cast<std::size_t>(spec.n) + 1, 1.0);
    for (int d = 1; d <= spec.n; ++d) powers[d] = powers[d - 1] * rho;
    FourierSpectrum out = spec;
    for (Mask s = 0; s < out.size(); ++s) out.coeffs[s] *= powers[popcount(s)];
    return out;
}

double mean_abs(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) sum += std::fabs(v);
    return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

BoundedEvaluator BoundedEvaluator::from_function(const BooleanFunction& f) {
    return BoundedEvaluator(
        f.arity(), [f](Mask x, Rng&) { return f.eval(x); }, true);
}

std::size_t clamp_count(double v) {
    if (!(v >= 1.0)) return 1;
    if (v >= kCountCeiling) return static_cast<std::size_t>(kCountCeiling);
    return static_cast<std::size_t>(v);
}

std::size_t chernoff_samples(double eta, double delta) {
    if (!(eta > 0.0)) throw InputError("accuracy must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("failure probability must lie in (0, 1)");
    return clamp_count(std::ceil(std::log(2.0 / delta) / (2.0 * eta * eta)));
}

std::size_t coefficient_samples(double eps, double delta) {
    return chernoff_samples(eps / 2.0, delta);
}

double estimate_coefficient(const BoundedEvaluator& a, Mask s, double eps, double delta,
                            std::uint64_t seed) {
    const std::size_t m = coefficient_samples(eps, delta);
    Rng rng = make_rng(seed);
    long long total = 0;
    for (std::size_t t = 0; t < m; ++t) {
        const Mask x = random_point(rng, a.arity());
        total += a(x, rng) * character(s, x);
    }
    return static_cast<double>(total) / static_cast<double>(m);
}

BoundedEvaluator project_avg(const BooleanFunction& f, Mask t) {
    const int n = f.arity();
    if (t & ~low_bits(n)) throw InputError("projection set exceeds arity");
    const Mask free = low_bits(n) & ~t;
    return BoundedEvaluator(
        n, [f, t, free](Mask x, Rng& rng) { return f.eval((x & t) | (rng() & free)); },
        free == 0);
}

namespace {

// Sweeps the live cube `passes` times and returns per-point sums.
std::vector<double> sweep_cube(const BoundedEvaluator& a, const Restriction& r,
                               std::size_t passes, Rng& rng) {
    const int m = popcount(r.live);
    std::vector<double> sums(std::size_t{1} << m, 0.0);
    for (std::size_t p = 0; p < passes; ++p) {
        for (Mask v = 0; v < sums.size(); ++v) {
            sums[v] += a(expand_bits(v, r.live) | r.fixed, rng);
        }
    }
    return sums;
}

std::size_t passes_for(const BoundedEvaluator& a, std::size_t cube, std::size_t samples) {
    if (a.deterministic()) return 1;
    return std::max<std::size_t>(1, (samples + cube - 1) / cube);
}

}  // namespace

std::vector<double> estimate_local_spectrum(const BoundedEvaluator& a, const Restriction& r,
                                            std::size_t samples, Rng& rng) {
    const int m = popcount(r.live);
    if (m > 24) throw UnsupportedError("local spectrum over more than 24 live coordinates");
    const std::size_t cube = std::size_t{1} << m;
    std::vector<double> v;
    double count = 0.0;
    if (a.deterministic() || samples >= cube) {
        const std::size_t passes = passes_for(a, cube, samples);
        v = sweep_cube(a, r, passes, rng);
        count = static_cast<double>(cube * passes);
    } else {
        v.assign(cube, 0.0);
        const std::size_t draws = std::max<std::size_t>(samples, 1);
        for (std::size_t t = 0; t < draws; ++t) {
            const Mask local = rng() & (cube - 1);
            v[local] += a(expand_bits(local, r.live) | r.fixed, rng);
        }
        count = static_cast<double>(draws);
    }
    wht_butterfly(v);
    for (double& c : v) c /= count;
    return v;
}

std::vector<double> estimate_restricted_coefficients(const BoundedEvaluator& a,
                                                     const Restriction& r,
                                                     std::span<const Mask> sets,
                                                     std::size_t samples, Rng& rng) {
    std::vector<double> out(sets.size(), 0.0);
    if (sets.empty()) return out;
    for (Mask s : sets) {
        if (s & ~r.live) throw InputError("coefficient set must lie inside the live set");
    }
    const int m = popcount(r.live);
    const std::size_t count = std::max<std::size_t>(samples, 1);
    bool whole_cube = false;
    if (m <= 24) {
        const std::size_t cube = std::size_t{1} << m;
        const bool sweep = cube <= count || (a.deterministic() && cube <= 4 * count);
        const double direct_cost = static_cast<double>(count) * static_cast<double>(sets.size());
        const double cube_cost = static_cast<double>(cube) * (m + 1) + static_cast<double>(count);
        whole_cube = sweep || (m <= 20 && cube_cost < direct_cost);
    }
    if (whole_cube) {
        const auto local = estimate_local_spectrum(a, r, count, rng);
        for (std::size_t i = 0; i < sets.size(); ++i) out[i] = local[compress_bits(sets[i], r.live)];
        return out;
    }
    std::vector<long long> totals(sets.size(), 0);
    for (std::size_t t = 0; t < count; ++t) {
        const Mask x = (rng() & r.live) | r.fixed;
        const int y = a(x, rng);
        for (std::size_t i = 0; i < sets.size(); ++i) totals[i] += y * character(sets[i], x);
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        out[i] = static_cast<double>(totals[i]) / static_cast<double>(count);
    }
    return out;
}

}  // namespace junta
