#pragma once

// Exact Fourier machinery over truth tables, plus sampling estimators for
// functions available only through randomized query access.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "junta/bits.hpp"
#include "junta/boolfn.hpp"

namespace junta {

inline constexpr int kNoLevelCap = std::numeric_limits<int>::max();

/// Complete coefficient vector indexed by subset mask: coeffs[S] = E[f chi_S].
struct FourierSpectrum {
    int n = 0;
    std::vector<double> coeffs;

    double operator[](Mask s) const { return coeffs[s]; }
    std::size_t size() const { return coeffs.size(); }

    /// Sum of squared coefficients.
    double total_weight() const;
};

/// Unnormalized in-place Walsh-Hadamard butterfly over a length-2^m array.
void wht_butterfly(std::span<double> data);

/// Coefficients of a real-valued table (index order as in boolfn).
FourierSpectrum wht(int n, std::vector<double> values);

/// Exact spectrum of a truth-table-backed function. White-box: does not
/// touch the query counter. Throws UnsupportedError for evaluators.
FourierSpectrum wht(const BooleanFunction& f);

/// Function values from coefficients.
std::vector<double> inverse_wht(const FourierSpectrum& spec);

double variance(const FourierSpectrum& spec);

/// Inf_i (1-based i), optionally restricted to levels |S| <= level_cap.
double influence(const FourierSpectrum& spec, int i, int level_cap = kNoLevelCap);

/// Sum over S containing i, |S| <= cap, of coeff^2 / |S|.
double norm_inf(const FourierSpectrum& spec, int i, int level_cap = kNoLevelCap);

/// Sum over S containing U, |S| <= cap, of coeff^2 / C(|S|, |U|).
double norm_inf_set(const FourierSpectrum& spec, Mask u, int level_cap = kNoLevelCap);

/// T_rho: coefficient-wise scaling by rho^|S|.
FourierSpectrum noise_op(const FourierSpectrum& spec, double rho);

/// E_x |g(x)| for a table of real values.
double mean_abs(std::span<const double> values);

/// A randomized sign-valued procedure for a bounded g : {+-1}^n -> [-1, 1]:
/// each call at x returns +-1 with expectation g(x), independently.
class BoundedEvaluator {
public:
    using Fn = std::function<int(Mask, Rng&)>;

    BoundedEvaluator(int arity, Fn fn, bool deterministic = false)
        : arity_(arity), fn_(std::move(fn)), deterministic_(deterministic) {}

    /// Wraps a Boolean function (deterministic; each call is one query).
    static BoundedEvaluator from_function(const BooleanFunction& f);

    int arity() const { return arity_; }
    bool deterministic() const { return deterministic_; }
    int operator()(Mask x, Rng& rng) const { return fn_(x, rng); }

private:
    int arity_ = 0;
    Fn fn_;
    bool deterministic_ = false;
};

/// Sample counts above this are clamped; they are unreachable in practice.
inline constexpr double kCountCeiling = 1e15;

/// Rounds a nonnegative count to size_t, clamped to [1, kCountCeiling].
std::size_t clamp_count(double v);

/// Hoeffding sample size for [0,1]-valued variables: ceil(ln(2/delta) / (2 eta^2)).
std::size_t chernoff_samples(double eta, double delta);

/// Sample size for a +-1 average within eps w.p. 1-delta: the [0,1] bound at
/// eta = eps/2, i.e. ceil(2 ln(2/delta) / eps^2).
std::size_t coefficient_samples(double eps, double delta);

/// Empirical mean of y * chi_S(x) over coefficient_samples(eps, delta)
/// uniform x, y ~ A(x).
double estimate_coefficient(const BoundedEvaluator& a, Mask s, double eps, double delta,
                            std::uint64_t seed);

/// Randomized evaluator for f_avg,T: at x, draw y with y_T = x_T and the rest
/// uniform, return f(y).
BoundedEvaluator project_avg(const BooleanFunction& f, Mask t);

/// Estimates the coefficients of the restriction A_{Jbar -> z} at every mask
/// in `sets` (each a subset of r.live) with roughly `samples` calls to A.
///
/// When 2^|J| <= samples the cube of live coordinates is swept in whole
/// passes (one pass for deterministic A, which is then exact); otherwise
/// points are drawn uniformly. Either way each term y * chi_S(x) is a +-1
/// variable with the right mean, independent across calls to A, so the
/// Hoeffding guarantee of plain sampling carries over.
std::vector<double> estimate_restricted_coefficients(const BoundedEvaluator& a,
                                                     const Restriction& r,
                                                     std::span<const Mask> sets,
                                                     std::size_t samples, Rng& rng);

/// All 2^|J| coefficients of A_{Jbar -> z}, indexed by the compressed local
/// mask (bit j = j-th smallest live coordinate). Sweeps the cube when the
/// budget covers it or A is deterministic, else accumulates uniform draws.
std::vector<double> estimate_local_spectrum(const BoundedEvaluator& a, const Restriction& r,
                                            std::size_t samples, Rng& rng);

}  // namespace junta
