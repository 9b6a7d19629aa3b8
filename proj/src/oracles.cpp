#include "junta/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "junta/errors.hpp"

namespace junta {

namespace {

double hash_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

constexpr int kMemoMaxArity = 22;
constexpr std::size_t kMemoMaxBytes = std::size_t{1} << 30;

}  // namespace

CoordinateOracle noisy_dictator(int i, int sign, double nu, std::uint64_t seed) {
    if (i < 1 || i > kMaxArity) throw InputError("oracle coordinate out of range");
    if (sign != 1 && sign != -1) throw InputError("oracle sign must be +1 or -1");
    if (!(nu >= 0.0 && nu < 0.5)) throw InputError("oracle corruption rate must lie in [0, 1/2)");
    CoordinateOracle g;
    g.nu = nu;
    g.target = i;
    const Mask b = bit(i - 1);
    g.eval = [b, sign, nu, seed](Mask x, Rng&) {
        int v = (x & b) ? -sign : sign;
        if (nu > 0.0 && hash_unit(derive_seed(seed, x)) < nu) v = -v;
        return v;
    };
    return g;
}

int local_correct(const CoordinateOracle& g, int n, Mask x, std::size_t reps, Rng& rng) {
    if (reps % 2 == 0) throw InputError("LocalCorrect needs an odd repetition count");
    long long votes = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        const Mask y = random_point(rng, n);
        votes += g.eval(y, rng) * g.eval(y ^ x, rng);
    }
    return votes >= 0 ? 1 : -1;
}

std::size_t CorrectionPolicy::repetitions(double nu) const {
    if (!(nu >= 0.0 && nu < 0.25)) throw InputError("LocalCorrect needs nu in [0, 1/4)");
    if (!(query_budget >= 1.0)) throw InputError("correction query budget must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("correction delta must lie in (0, 1)");
    if (nu == 0.0) return 1;
    const double gap = 0.5 - 2.0 * nu;
    auto reps = static_cast<std::size_t>(
        std::ceil(std::log(2.0 * query_budget / delta) / (2.0 * gap * gap)));
    if (reps % 2 == 0) ++reps;
    return std::max<std::size_t>(reps, 1);
}

std::size_t SamplerPolicy::budget(std::size_t k_prime) const {
    if (!(constant > 0.0)) throw InputError("sampler constant must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw InputError("sampler delta must lie in (0, 1)");
    if (k_prime == 0) return 0;
    const double kp = static_cast<double>(k_prime);
    const double steps = constant * kp * kp * std::log(kp / delta);
    return static_cast<std::size_t>(std::ceil(steps));
}

struct OracleSet::Shared {
    int n = 0;
    std::vector<CoordinateOracle> oracles;
    std::vector<std::size_t> reps;
    std::uint64_t seed = 0;
    std::vector<std::unique_ptr<std::atomic<std::int8_t>[]>> memo;
    std::atomic<std::uint64_t> calls{0};
};

OracleSet::OracleSet(int n, std::vector<CoordinateOracle> oracles, CorrectionPolicy policy,
                     std::uint64_t seed)
    : n_(n), shared_(std::make_shared<Shared>()) {
    if (n < 1 || n > kMaxArity) throw InputError("oracle arity out of range");
    shared_->n = n;
    shared_->seed = seed;
    for (const auto& g : oracles) {
        if (!g.eval) throw InputError("coordinate oracle without an evaluator");
        shared_->reps.push_back(policy.repetitions(g.nu));
    }
    shared_->oracles = std::move(oracles);
    const std::size_t count = shared_->oracles.size();
    if (n <= kMemoMaxArity && count * (std::size_t{1} << n) <= kMemoMaxBytes) {
        for (std::size_t j = 0; j < count; ++j) {
            shared_->memo.push_back(std::make_unique<std::atomic<std::int8_t>[]>(std::size_t{1} << n));
        }
    }
    members_.resize(count);
    for (std::size_t j = 0; j < count; ++j) members_[j] = j;
}

const CoordinateOracle& OracleSet::oracle(std::size_t j) const {
    return shared_->oracles.at(members_.at(j));
}

std::size_t OracleSet::repetitions(std::size_t j) const { return shared_->reps.at(members_.at(j)); }

int OracleSet::corrected(std::size_t j, Mask y) const {
    const std::size_t g = members_[j];
    Shared& s = *shared_;
    if (!s.memo.empty()) {
        const std::int8_t cached = s.memo[g][y].load(std::memory_order_relaxed);
        if (cached != 0) return cached;
    }
    Rng rng = make_rng(derive_seed(s.seed, g, y));
    const int v = local_correct(s.oracles[g], s.n, y, s.reps[g], rng);
    s.calls.fetch_add(2 * s.reps[g], std::memory_order_relaxed);
    if (!s.memo.empty()) s.memo[g][y].store(static_cast<std::int8_t>(v), std::memory_order_relaxed);
    return v;
}

Mask OracleSet::read(Mask y) const {
    Mask z = 0;
    for (std::size_t j = 0; j < members_.size(); ++j) {
        if (corrected(j, y) < 0) z |= bit(static_cast<int>(j));
    }
    return z;
}

OracleSet OracleSet::select(std::span<const std::size_t> members) const {
    OracleSet out;
    out.n_ = n_;
    out.shared_ = shared_;
    for (std::size_t j : members) out.members_.push_back(members_.at(j));
    return out;
}

std::uint64_t OracleSet::oracle_calls() const {
    return shared_ ? shared_->calls.load(std::memory_order_relaxed) : 0;
}

std::vector<int> OracleSet::targets() const {
    std::vector<int> out;
    for (std::size_t j = 0; j < members_.size(); ++j) out.push_back(oracle(j).target);
    return out;
}

Mask OracleSet::target_mask() const {
    Mask m = 0;
    for (int t : targets()) {
        if (t > 0) m |= bit(t - 1);
    }
    return m;
}

Mask influential_coordinates(const FourierSpectrum& spec, int k, double eps) {
    if (k < 1) throw InputError("k must be positive");
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    const double threshold = eps * eps / k;
    Mask s = 0;
    for (int i = 1; i <= spec.n; ++i) {
        if (influence(spec, i, k) + 1e-12 >= threshold) s |= bit(i - 1);
    }
    return s;
}

OracleSet SimulatedProvider::provide(const BooleanFunction& f, int k, double eps,
                                     std::uint64_t seed) const {
    const int n = f.arity();
    Mask coords = 0;
    if (options_.coordinates) {
        coords = *options_.coordinates;
        if (coords & ~low_bits(n)) throw InputError("explicit oracle coordinates exceed arity");
    } else {
        if (!f.has_table()) {
            throw UnsupportedError(
                "the simulated provider needs a truth table or an explicit coordinate list");
        }
        coords = influential_coordinates(wht(f), k, eps);
    }
    std::vector<int> order;
    for (int j : bit_positions(coords)) order.push_back(j + 1);
    Rng rng = make_rng(derive_seed(seed, name_tag("provider-order")));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<CoordinateOracle> oracles;
    for (int i : order) {
        const int sign = (rng() & 1) ? -1 : 1;
        oracles.push_back(noisy_dictator(i, sign, options_.nu,
                                         derive_seed(seed, name_tag("corruption"), i)));
    }
    return OracleSet(n, std::move(oracles), options_.correction,
                     derive_seed(seed, name_tag("correction")));
}

OracleSet simulate_oracle_provider(const BooleanFunction& f, int k, double eps, double nu,
                                   std::uint64_t seed) {
    SimulatedProvider::Options options;
    options.nu = nu;
    return SimulatedProvider(options).provide(f, k, eps, seed);
}

ConsistentSample sample_consistent(const OracleSet& d, Mask target, Rng& rng,
                                   const SamplerPolicy& policy) {
    const int n = d.arity();
    const std::size_t kp = d.size();
    if (kp < 64 && (target & ~low_bits(static_cast<int>(kp)))) {
        throw InputError("target vector longer than the oracle set");
    }
    ConsistentSample out;
    out.y = random_point(rng, n);
    if (kp == 0) return out;
    const std::size_t budget = policy.budget(kp);
    const double flip = 1.0 / static_cast<double>(kp);
    const Mask all = low_bits(n);
    int dist = popcount(d.read(out.y) ^ target);
    while (dist > 0) {
        if (out.proposals >= budget) {
            throw StageFailure("sample_consistent", "proposal budget exhausted");
        }
        ++out.proposals;
        const Mask candidate = out.y ^ random_subset(rng, all, flip);
        const int cand_dist = popcount(d.read(candidate) ^ target);
        if (cand_dist < dist) {
            out.y = candidate;
            dist = cand_dist;
        }
    }
    return out;
}

int implicit_junta_eval(const BooleanFunction& f, const OracleSet& d, Mask x, Rng& rng,
                        const SamplerPolicy& policy) {
    if (f.arity() != d.arity()) throw InputError("oracle set and function disagree on arity");
    return f.eval(sample_consistent(d, x, rng, policy).y);
}

BoundedEvaluator implicit_junta(const BooleanFunction& f, const OracleSet& d,
                                const SamplerPolicy& policy, std::shared_ptr<SamplerStats> stats) {
    if (f.arity() != d.arity()) throw InputError("oracle set and function disagree on arity");
    if (d.size() > static_cast<std::size_t>(kMaxArity)) {
        throw UnsupportedError("implicit junta over more than 63 oracles");
    }
    return BoundedEvaluator(static_cast<int>(d.size()), [f, d, policy, stats](Mask x, Rng& rng) {
        const ConsistentSample s = sample_consistent(d, x, rng, policy);
        if (stats) {
            stats->samples.fetch_add(1, std::memory_order_relaxed);
            stats->proposals.fetch_add(s.proposals, std::memory_order_relaxed);
        }
        return f.eval(s.y);
    });
}

}  // namespace junta
