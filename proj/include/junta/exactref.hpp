#pragma once

// Brute-force ground truth for desk-scale functions. Everything here reads
// the truth table directly and never touches a query counter.

#include <vector>

#include "junta/bits.hpp"
#include "junta/boolfn.hpp"
#include "junta/fourier.hpp"

namespace junta {

/// Largest arity accepted by the exhaustive routines.
inline constexpr int kExactMaxArity = 16;

struct BestJunta {
    double distance = 0.0;
    double correlation = 0.0;
    Mask set = 0;  // lexicographically smallest maximizer
};

/// E_x |f_avg,T(x)|: the correlation of f with sgn(f_avg,T), the best
/// Boolean junta on T.
double exact_corr_on(const FourierSpectrum& spec, Mask t);

/// Best k-junta by enumeration of all size-min(k, n) sets.
BestJunta exact_dist_to_juntas(const FourierSpectrum& spec, int k);
BestJunta exact_dist_to_juntas(const BooleanFunction& f, int k);

struct BestMass {
    double mass = 0.0;
    Mask set = 0;
};

/// Sum over S inside T of coeff^2.
double exact_mass_on(const FourierSpectrum& spec, Mask t);

/// Largest Fourier mass carried by a set of at most k coordinates.
BestMass exact_subset_mass(const FourierSpectrum& spec, int k);
BestMass exact_subset_mass(const BooleanFunction& f, int k);

/// Number of restriction levels for single coordinates: ceil(log2(10k)) + 1.
int lambda_levels(int k);

/// Number of restriction levels for sets of size kappa:
/// 2 kappa ceil(log2(10k)) + 1.
int set_lambda_levels(int kappa, int k);

/// Closed form of lambda_i (1-based i).
double exact_lambda(const FourierSpectrum& spec, int i, int k);

/// Closed form of lambda_U with p = 1 - 1/(2|U|).
double exact_lambda_set(const FourierSpectrum& spec, Mask u, int k);

/// Sum over m < levels of p^{m a} (1 - p^m)^b, with 0^0 = 1. The weight a
/// set of size a + b receives in lambda for a target of size a.
double lambda_weight(double p, int a, int b, int levels);

}  // namespace junta
