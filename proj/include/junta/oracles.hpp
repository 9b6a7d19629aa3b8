#pragma once

// Coordinate oracles: randomized evaluators close to +-Dict_i for an unknown
// i, self-corrected by LocalCorrect, and the consistent-input sampler that
// turns a set of them into query access to an implicit junta.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "junta/bits.hpp"
#include "junta/boolfn.hpp"
#include "junta/fourier.hpp"

namespace junta {

struct CoordinateOracle {
    using Fn = std::function<int(Mask, Rng&)>;

    Fn eval;
    double nu = 0.0;
    /// Harness-only ground truth (1-based coordinate, 0 when unknown).
    /// Algorithms never read it.
    int target = 0;
};

/// Dictator or antidictator on coordinate i (1-based) whose output is
/// flipped on a pseudo-random nu-fraction of inputs. The corrupted set is a
/// pure function of the seed.
CoordinateOracle noisy_dictator(int i, int sign, double nu, std::uint64_t seed);

/// LocalCorrect: majority over `reps` (odd) draws of g(y) g(x.y), y uniform
/// over {+-1}^n.
int local_correct(const CoordinateOracle& g, int n, Mask x, std::size_t reps, Rng& rng);

/// Repetition count for corrected queries, chosen so that q corrected
/// queries all succeed with probability at least 1 - delta.
struct CorrectionPolicy {
    double query_budget = 1e8;
    double delta = 0.01;

    /// ceil(ln(2q/delta) / (2 (1/2 - 2 nu)^2)) rounded up to odd; 1 when nu = 0.
    std::size_t repetitions(double nu) const;
};

/// Proposal budget of the consistent-input sampler:
/// ceil(c * k'^2 * ln(k'/delta)), with k'^2 ln(k') read as ln(1/delta) at k' = 1.
struct SamplerPolicy {
    double constant = 8.0;
    double delta = 1e-6;

    std::size_t budget(std::size_t k_prime) const;
};

/// An ordered collection of coordinate oracles plus the correction policy.
/// Selections made with select() share the underlying oracles and their
/// memoized corrected values.
class OracleSet {
public:
    OracleSet() = default;
    OracleSet(int n, std::vector<CoordinateOracle> oracles, CorrectionPolicy policy,
              std::uint64_t seed);

    int arity() const { return n_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    const CoordinateOracle& oracle(std::size_t j) const;
    std::size_t repetitions(std::size_t j) const;

    /// Corrected value of member j at y. A pure function of (seed, member,
    /// y), memoized when 2^n is small.
    int corrected(std::size_t j, Mask y) const;

    /// All corrected values at y: bit j is set when member j reads -1.
    Mask read(Mask y) const;

    /// Sub-collection in the given member order.
    OracleSet select(std::span<const std::size_t> members) const;

    /// Raw oracle evaluations so far (shared across selections).
    std::uint64_t oracle_calls() const;

    /// Harness-only: targets of the members (1-based) and their union.
    std::vector<int> targets() const;
    Mask target_mask() const;

private:
    struct Shared;

    int n_ = 0;
    std::shared_ptr<Shared> shared_;
    std::vector<std::size_t> members_;
};

/// Coordinates with Inf_i^{<=k}[f] >= eps^2 / k, from the exact spectrum.
Mask influential_coordinates(const FourierSpectrum& spec, int k, double eps);

class OracleProvider {
public:
    virtual ~OracleProvider() = default;
    virtual OracleSet provide(const BooleanFunction& f, int k, double eps,
                              std::uint64_t seed) const = 0;
};

/// Stand-in for a real oracle construction: selects the influential
/// coordinates exactly and wraps each in a nu-corrupted, randomly signed
/// dictator. Needs a truth table unless `coordinates` is given.
class SimulatedProvider : public OracleProvider {
public:
    struct Options {
        double nu = 0.1;
        std::optional<Mask> coordinates;
        CorrectionPolicy correction;
    };

    SimulatedProvider() = default;
    explicit SimulatedProvider(Options options) : options_(std::move(options)) {}

    OracleSet provide(const BooleanFunction& f, int k, double eps,
                      std::uint64_t seed) const override;

private:
    Options options_;
};

OracleSet simulate_oracle_provider(const BooleanFunction& f, int k, double eps, double nu,
                                   std::uint64_t seed);

struct ConsistentSample {
    Mask y = 0;
    std::size_t proposals = 0;
};

/// Algorithm 1 hill climb: a uniform y with member j reading x_j for every
/// j (bit j of `target` set means -1). Throws StageFailure when the
/// proposal budget runs out.
ConsistentSample sample_consistent(const OracleSet& d, Mask target, Rng& rng,
                                   const SamplerPolicy& policy = {});

struct SamplerStats {
    std::atomic<std::uint64_t> samples{0};
    std::atomic<std::uint64_t> proposals{0};
};

/// One consistent sample then one query to f.
int implicit_junta_eval(const BooleanFunction& f, const OracleSet& d, Mask x, Rng& rng,
                        const SamplerPolicy& policy = {});

/// Randomized evaluator for g(x) = E[f(y) | member j reads x_j], of arity
/// |d|. Input bit j drives member j.
BoundedEvaluator implicit_junta(const BooleanFunction& f, const OracleSet& d,
                                const SamplerPolicy& policy = {},
                                std::shared_ptr<SamplerStats> stats = nullptr);

}  // namespace junta
