#pragma once

// Set-level lambda estimation, the branching process that hunts for a
// subset B of the target carrying its high-level mass, phase-two low-degree
// correlation (or mass) estimation, and the pipelines built on them.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "junta/bits.hpp"
#include "junta/boolfn.hpp"
#include "junta/diagnostics.hpp"
#include "junta/fourier.hpp"
#include "junta/oracles.hpp"
#include "junta/prune.hpp"

namespace junta {

struct SetLambdaEstimates {
    int kappa = 0;
    double p = 0.0;
    int levels = 0;
    std::vector<Mask> sets;      // every size-kappa subset of the frame's live inputs
    std::vector<double> values;  // aligned with sets
    std::size_t restrictions = 0;
    std::size_t coefficient_samples = 0;
    double accuracy = 0.0;
    double delta = 0.0;

    /// Value for a key set; throws InputError for an unknown key.
    double at(Mask u) const;
};

/// Algorithm 4: for d = 0 .. levels-1, m random p^d restrictions, every
/// size-kappa coefficient inside J estimated, squared and averaged.
SetLambdaEstimates estimate_set_lambdas(const BoundedEvaluator& a, int kappa, int k,
                                        double accuracy, double delta, std::uint64_t seed,
                                        const LambdaOptions& options = {});

struct NodeSamples {
    SetLambdaEstimates lambdas;
    Mask z = 0;                // assignment to the already-picked members
    std::vector<Mask> picks;  // sampled size-kappa member sets, in draw order
    bool zero_mass = false;
};

/// One branching-process node: fix the members in `picked` to a fresh z,
/// estimate set lambdas over the rest and draw r sets from them.
NodeSamples branch_node_samples(const BoundedEvaluator& a, Mask picked, int kappa, int k,
                                double accuracy, double delta, std::size_t r, std::uint64_t seed,
                                const EstimatorBudget& budget = {});

struct BranchOptions {
    double r_constant = 92.0;  // r = ceil(r_constant / eps^2)
    std::size_t r = 0;         // overrides the derived r when nonzero
    std::optional<int> kappa;  // default max(1, ceil(sqrt(eps k)))
    std::optional<int> depth;  // default 3 alpha + ceil(log2(2/delta))
    EstimatorBudget budget;
    SamplerPolicy sampler;
};

struct BranchResult {
    std::vector<Mask> leaves;  // distinct member sets, increasing mask order
    int kappa = 0;
    int alpha = 0;
    int depth_cap = 0;
    std::size_t r = 0;
    std::size_t nodes_expanded = 0;
    std::size_t zero_mass_nodes = 0;
    double log_tree_bound = 0.0;  // ln(2 (r+1)^depth)
};

int distance_kappa(int k, double eps);
int mass_kappa(int k);

/// Algorithm 5 from the root (depth 0, nothing picked), breadth first.
/// Nodes with equal member sets at the same depth are merged.
BranchResult branching_process(const BooleanFunction& f, const OracleSet& d, int k, double eps,
                               double delta, std::uint64_t seed, const BranchOptions& options = {});

struct PhaseTwoOptions {
    double t_constant = 2.0;  // t = ceil(t_constant ln(1/delta) / eps^2)
    std::size_t t = 0;        // overrides t when nonzero
    std::size_t samples = 0;  // calls to A per z; 0 = derived
    double loose = 1.0;
    bool mass = false;        // sum of squares up to mass_cutoff, no damping
    int mass_cutoff = 0;
    SamplerPolicy sampler;
};

struct PhaseTwoResult {
    Mask best = 0;  // member mask of the winning U
    double value = 0.0;
    std::vector<std::pair<Mask, double>> candidates;
    std::size_t t = 0;
    std::size_t samples = 0;
    bool enumerated = false;  // z ranged over all of {+-1}^B
    double rho = 1.0;
    int zeta = 0;
};

double phase_two_rho(int k, double eps);
int phase_two_zeta(int k, double eps);

/// c_U for every size-min(k, |d|) member set U containing B, maximized with
/// ties going to the smaller mask.
PhaseTwoResult phase_two(const BooleanFunction& f, const OracleSet& d, Mask b, int k, double eps,
                         double delta, std::uint64_t seed, const PhaseTwoOptions& options = {});

/// Exact c_U (resp. m_U) from a spectrum: z ranges over all of {+-1}^B
/// and coefficients are exact. B and U are coordinate sets, B inside U.
double exact_phase_two_value(const FourierSpectrum& spec, Mask b, Mask u, double rho, int zeta);
double exact_phase_two_mass(const FourierSpectrum& spec, Mask b, Mask u, int cutoff);

struct DistanceOptions {
    std::shared_ptr<const OracleProvider> provider;  // default: simulated, nu = 0.1
    double stage_delta = 0.05;
    ReduceOptions reduce;
    BranchOptions branch;
    PhaseTwoOptions phase_two;
};

struct DistanceResult {
    double estimate = 0.0;  // alpha for distance, the mass for mass
    double alpha = 0.0;
    double c_tilde = 0.0;
    Mask best_set = 0;  // harness-only, from oracle targets
    std::size_t candidates_examined = 0;
    std::size_t branch_leaves = 0;
    int kappa = 0;
    std::size_t provider_size = 0;
    std::size_t k_prime = 0;
    std::uint64_t query_count = 0;
    std::vector<PhaseDiagnostic> phases;
    std::optional<std::string> failed_stage;
};

/// Provider, pruning, branching, phase two on every leaf; all at eps / 6.
DistanceResult distance_estimate(const BooleanFunction& f, int k, double eps, std::uint64_t seed,
                                 const DistanceOptions& options = {});

/// Same pipeline with kappa = ceil(sqrt(k)) and the mass score.
DistanceResult mass_estimate(const BooleanFunction& f, int k, double eps, std::uint64_t seed,
                             const DistanceOptions& options = {});

}  // namespace junta
