#pragma once

// Single-coordinate lambda estimation, oracle pruning, and the relaxed
// (poly-query) distance estimator built on them.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "junta/bits.hpp"
#include "junta/boolfn.hpp"
#include "junta/diagnostics.hpp"
#include "junta/fourier.hpp"
#include "junta/oracles.hpp"

namespace junta {

/// Sampling budget knobs shared by the estimators. Zero means "derive from
/// the accuracy target"; `loose` multiplies every accuracy target used for
/// derivation. Anything other than the defaults is off the declared
/// guarantees and is echoed into reports.
struct EstimatorBudget {
    double loose = 1.0;
    std::size_t restrictions = 0;         // restrictions per level
    std::size_t coefficient_samples = 0;  // calls to A per restricted estimate
};

struct LambdaOptions {
    /// Inputs of A outside frame->live are held at frame->fixed; the
    /// random restrictions act on frame->live only. Default: all live.
    std::optional<Restriction> frame;
    EstimatorBudget budget;
};

struct LambdaEstimates {
    std::vector<double> values;                  // indexed by input of A
    std::vector<std::vector<double>> per_level;  // [level][input]
    int levels = 0;
    std::size_t restrictions = 0;
    std::size_t coefficient_samples = 0;
    double accuracy = 0.0;
    double delta = 0.0;
};

/// Derived restrictions per level for a lambda estimate over `live` inputs:
/// Hoeffding at tolerance accuracy / (2 levels), failure delta / (2 live levels).
std::size_t lambda_restrictions(double accuracy, double delta, int live, int levels);

/// Estimates lambda_i for every live input of A (Algorithm 2 shape): for
/// each level d, m random 2^-d restrictions, degree-one coefficients of the
/// restricted function squared and averaged.
LambdaEstimates estimate_lambdas(const BoundedEvaluator& a, int k, double accuracy, double delta,
                                 std::uint64_t seed, const LambdaOptions& options = {});

/// Nonnegative weights with inverse-CDF sampling in index order.
class SamplingDistribution {
public:
    explicit SamplingDistribution(std::vector<double> weights);

    double total() const { return total_; }
    bool zero_mass() const { return !(total_ > 0.0); }
    const std::vector<double>& weights() const { return weights_; }

    /// Throws UnsupportedError on zero mass.
    std::size_t sample(Rng& rng) const;

private:
    std::vector<double> weights_;
    double total_ = 0.0;
};

struct ReduceOptions {
    double round_constant = 30.0;
    std::size_t rounds = 0;  // 0 = reduce_rounds(...)
    EstimatorBudget budget;
    SamplerPolicy sampler;
};

struct ReduceResult {
    OracleSet selected;
    std::vector<std::size_t> picks;  // indices into the input set, in pick order
    std::size_t rounds_planned = 0;
    std::size_t rounds_run = 0;
    std::size_t zero_mass_rounds = 0;
    bool exhausted = false;  // every oracle picked before the rounds ran out
};

/// ceil(C (k + ln(1/delta)) / eps^2).
std::size_t reduce_rounds(int k, double eps, double delta, double round_constant);

/// Algorithm 3: repeatedly condition the picked oracles on a fresh z,
/// estimate lambdas of the implicit function on the rest, and pick one
/// index from the normalized estimates.
ReduceResult reduce_oracles(const BooleanFunction& f, const OracleSet& d, int k, double eps,
                            double delta, std::uint64_t seed, const ReduceOptions& options = {});

struct CorrOptions {
    std::size_t points = 0;  // x samples; 0 = derived
    std::size_t reps = 0;    // implicit evaluations per point; 0 = derived
    SamplerPolicy sampler;
};

struct CorrEstimate {
    double value = 0.0;
    std::size_t points = 0;
    std::size_t reps = 0;
    bool enumerated = false;
};

/// Estimates E_x |f_avg,S'(x)| through implicit access over the oracles.
/// Enumerates x when the cube is no larger than the point budget.
CorrEstimate estimate_best_junta_corr(const BooleanFunction& f, const OracleSet& d, double eps,
                                      double delta, std::uint64_t seed,
                                      const CorrOptions& options = {});

struct RelaxedOptions {
    std::shared_ptr<const OracleProvider> provider;  // default: simulated, nu = 0.1
    double delta = 0.01;
    ReduceOptions reduce;
    CorrOptions corr;
};

struct RelaxedResult {
    double alpha = 0.0;
    double correlation = 0.0;
    std::size_t provider_size = 0;
    std::size_t k_prime = 0;
    Mask selected_coordinates = 0;  // harness-only, from oracle targets
    std::uint64_t query_count = 0;
    std::vector<PhaseDiagnostic> phases;
    std::optional<std::string> failed_stage;
};

/// Provider, pruning, then the best-junta correlation on the survivors;
/// alpha = (1 - correlation) / 2. A StageFailure is recorded, not thrown.
RelaxedResult relaxed_distance_estimate(const BooleanFunction& f, int k, double eps,
                                        std::uint64_t seed, const RelaxedOptions& options = {});

}  // namespace junta
