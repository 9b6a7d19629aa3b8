#include "junta/exactref.hpp"

#include <cmath>
#include <string>

#include "junta/errors.hpp"

namespace junta {

namespace {

void check_exact_size(int n) {
    if (n > kExactMaxArity) {
        throw UnsupportedError("exhaustive search supports n <= " + std::to_string(kExactMaxArity));
    }
}

void check_set(const FourierSpectrum& spec, Mask t) {
    if (t & ~low_bits(spec.n)) throw InputError("set exceeds arity");
}

int ceil_log2(int v) {
    int bits = 0;
    while ((1 << bits) < v) ++bits;
    return bits;
}

}  // namespace

double exact_corr_on(const FourierSpectrum& spec, Mask t) {
    check_set(spec, t);
    const int m = popcount(t);
    std::vector<double> local(std::size_t{1} << m);
    for (Mask v = 0; v < local.size(); ++v) local[v] = spec.coeffs[expand_bits(v, t)];
    wht_butterfly(local);
    return mean_abs(local);
}

BestJunta exact_dist_to_juntas(const FourierSpectrum& spec, int k) {
    if (k < 0) throw InputError("k must be non-negative");
    check_exact_size(spec.n);
    const int size = std::min(k, spec.n);
    BestJunta best;
    best.correlation = -1.0;
    for (Mask t : subsets_of_size(spec.n, size)) {
        const double c = exact_corr_on(spec, t);
        if (c > best.correlation) {
            best.correlation = c;
            best.set = t;
        }
    }
    best.distance = (1.0 - best.correlation) / 2.0;
    return best;
}

BestJunta exact_dist_to_juntas(const BooleanFunction& f, int k) {
    check_exact_size(f.arity());
    return exact_dist_to_juntas(wht(f), k);
}

double exact_mass_on(const FourierSpectrum& spec, Mask t) {
    check_set(spec, t);
    double mass = 0.0;
    Mask sub = t;
    while (true) {
        mass += spec.coeffs[sub] * spec.coeffs[sub];
        if (sub == 0) break;
        sub = (sub - 1) & t;
    }
    return mass;
}

BestMass exact_subset_mass(const FourierSpectrum& spec, int k) {
    if (k < 0) throw InputError("k must be non-negative");
    check_exact_size(spec.n);
    const int size = std::min(k, spec.n);
    BestMass best;
    best.mass = -1.0;
    for (Mask t : subsets_of_size(spec.n, size)) {
        const double m = exact_mass_on(spec, t);
        if (m > best.mass) {
            best.mass = m;
            best.set = t;
        }
    }
    return best;
}

BestMass exact_subset_mass(const BooleanFunction& f, int k) {
    check_exact_size(f.arity());
    return exact_subset_mass(wht(f), k);
}

int lambda_levels(int k) {
    if (k < 1) throw InputError("k must be positive");
    return ceil_log2(10 * k) + 1;
}

int set_lambda_levels(int kappa, int k) {
    if (kappa < 1) throw InputError("kappa must be positive");
    return 2 * kappa * ceil_log2(10 * k) + 1;
}

double lambda_weight(double p, int a, int b, int levels) {
    double total = 0.0;
    for (int m = 0; m < levels; ++m) {
        const double pm = std::pow(p, m);
        // std::pow(0.0, 0) is 1, matching the 0^0 = 1 convention.
        total += std::pow(pm, a) * std::pow(1.0 - pm, b);
    }
    return total;
}

double exact_lambda(const FourierSpectrum& spec, int i, int k) {
    if (i < 1 || i > spec.n) throw InputError("coordinate outside [1, n]");
    const int levels = lambda_levels(k);
    std::vector<double> weight(static_cast<std::size_t>(spec.n) + 1, 0.0);
    for (int s = 1; s <= spec.n; ++s) weight[s] = lambda_weight(0.5, 1, s - 1, levels);
    const Mask b = bit(i - 1);
    double total = 0.0;
    for (Mask s = 0; s < spec.size(); ++s) {
        if (s & b) total += spec.coeffs[s] * spec.coeffs[s] * weight[popcount(s)];
    }
    return total;
}

double exact_lambda_set(const FourierSpectrum& spec, Mask u, int k) {
    if (u == 0) throw InputError("lambda of a set needs a nonempty set");
    check_set(spec, u);
    const int a = popcount(u);
    const double p = 1.0 - 1.0 / (2.0 * a);
    const int levels = set_lambda_levels(a, k);
    std::vector<double> weight(static_cast<std::size_t>(spec.n) + 1, 0.0);
    for (int s = a; s <= spec.n; ++s) weight[s] = lambda_weight(p, a, s - a, levels);
    const Mask free = low_bits(spec.n) & ~u;
    double total = 0.0;
    Mask sub = free;
    while (true) {
        const Mask s = u | sub;
        total += spec.coeffs[s] * spec.coeffs[s] * weight[popcount(s)];
        if (sub == 0) break;
        sub = (sub - 1) & free;
    }
    return total;
}

}  // namespace junta
