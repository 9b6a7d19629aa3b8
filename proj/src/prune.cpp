#include "junta/prune.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <utility>

#include "junta/errors.hpp"
#include "junta/exactref.hpp"

namespace junta {

namespace {

constexpr std::size_t kTrialChunk = 2048;

void check_unit_interval(double v, const char* what) {
    if (!(v > 0.0 && v < 1.0)) throw InputError(std::string(what) + " must lie in (0, 1)");
}

}  // namespace

std::size_t lambda_restrictions(double accuracy, double delta, int live, int levels) {
    const double width = std::max(live, 1) * static_cast<double>(levels);
    return chernoff_samples(accuracy / (2.0 * levels), delta / (2.0 * width));
}

LambdaEstimates estimate_lambdas(const BoundedEvaluator& a, int k, double accuracy, double delta,
                                 std::uint64_t seed, const LambdaOptions& options) {
    if (k < 1) throw InputError("k must be positive");
    if (!(accuracy > 0.0)) throw InputError("lambda accuracy must be positive");
    check_unit_interval(delta, "lambda delta");
    if (!(options.budget.loose > 0.0)) throw InputError("loose factor must be positive");
    const int kp = a.arity();
    const Restriction frame = options.frame.value_or(Restriction{low_bits(kp), 0});
    if (frame.live & ~low_bits(kp)) throw InputError("lambda frame exceeds the evaluator arity");

    const int levels = lambda_levels(k);
    const int live = popcount(frame.live);
    const double acc = accuracy * options.budget.loose;

    LambdaEstimates out;
    out.levels = levels;
    out.accuracy = accuracy;
    out.delta = delta;
    out.restrictions = options.budget.restrictions
                           ? options.budget.restrictions
                           : lambda_restrictions(acc, delta, live, levels);
    const double width = std::max(live, 1) * static_cast<double>(out.restrictions) * levels;
    out.coefficient_samples = options.budget.coefficient_samples
                                  ? options.budget.coefficient_samples
                                  : coefficient_samples(acc / (6.0 * levels), delta / (2.0 * width));
    out.values.assign(static_cast<std::size_t>(kp), 0.0);
    out.per_level.assign(static_cast<std::size_t>(levels), out.values);
    if (live == 0) return out;

    const std::size_t m = out.restrictions;
    const std::size_t trials = m * static_cast<std::size_t>(levels);
    std::vector<std::vector<std::pair<int, double>>> squares(std::min(trials, kTrialChunk));
    for (std::size_t begin = 0; begin < trials; begin += kTrialChunk) {
        const std::size_t count = std::min(kTrialChunk, trials - begin);
        parallel_for(count, [&](std::size_t slot) {
            const std::size_t trial = begin + slot;
            const int d = static_cast<int>(trial / m);
            Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(d), trial % m));
            const Mask j = random_subset(rng, frame.live, std::ldexp(1.0, -d));
            const Restriction r{j, (frame.fixed & ~frame.live) | (rng() & frame.live & ~j)};
            std::vector<Mask> sets;
            for (int i : bit_positions(j)) sets.push_back(bit(i));
            auto coeffs = estimate_restricted_coefficients(a, r, sets, out.coefficient_samples, rng);
            std::vector<std::pair<int, double>> local;
            for (std::size_t t = 0; t < sets.size(); ++t) {
                local.emplace_back(std::countr_zero(sets[t]), coeffs[t] * coeffs[t]);
            }
            squares[slot] = std::move(local);
        });
        for (std::size_t slot = 0; slot < count; ++slot) {
            const int d = static_cast<int>((begin + slot) / m);
            for (const auto& [i, sq] : squares[slot]) out.per_level[d][i] += sq;
        }
    }
    for (int d = 0; d < levels; ++d) {
        for (int i = 0; i < kp; ++i) {
            out.per_level[d][i] /= static_cast<double>(m);
            out.values[i] += out.per_level[d][i];
        }
    }
    return out;
}

SamplingDistribution::SamplingDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
    for (double& w : weights_) {
        if (!(w > 0.0)) w = 0.0;
        total_ += w;
    }
}

std::size_t SamplingDistribution::sample(Rng& rng) const {
    if (zero_mass()) throw UnsupportedError("sampling from a zero-mass distribution");
    const double u = uniform01(rng) * total_;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] <= 0.0) continue;
        acc += weights_[i];
        last = i;
        if (u < acc) return i;
    }
    return last;
}

std::size_t reduce_rounds(int k, double eps, double delta, double round_constant) {
    if (k < 1) throw InputError("k must be positive");
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    check_unit_interval(delta, "reduce delta");
    if (!(round_constant > 0.0)) throw InputError("round constant must be positive");
    return clamp_count(std::ceil(round_constant * (k + std::log(1.0 / delta)) / (eps * eps)));
}

ReduceResult reduce_oracles(const BooleanFunction& f, const OracleSet& d, int k, double eps,
                            double delta, std::uint64_t seed, const ReduceOptions& options) {
    ReduceResult out;
    out.rounds_planned = options.rounds ? options.rounds
                                        : reduce_rounds(k, eps, delta, options.round_constant);
    const std::size_t kp = d.size();
    if (kp == 0) {
        out.selected = d.select({});
        out.exhausted = true;
        return out;
    }
    const BoundedEvaluator a = implicit_junta(f, d, options.sampler);
    const Mask all = low_bits(static_cast<int>(kp));
    const double accuracy = eps * eps / (48.0 * static_cast<double>(kp));
    const double round_delta = delta / (2.0 * static_cast<double>(out.rounds_planned));
    Mask picked = 0;
    for (std::size_t round = 0; round < out.rounds_planned; ++round) {
        const Mask free = all & ~picked;
        if (!free) {
            out.exhausted = true;
            break;
        }
        ++out.rounds_run;
        Rng rng = make_rng(derive_seed(seed, name_tag("round"), round));
        LambdaOptions lo;
        lo.frame = Restriction{free, rng() & picked};
        lo.budget = options.budget;
        const auto est = estimate_lambdas(a, k, accuracy, round_delta,
                                          derive_seed(seed, name_tag("lambdas"), round), lo);
        const SamplingDistribution dist(est.values);
        if (dist.zero_mass()) {
            ++out.zero_mass_rounds;
            continue;
        }
        const std::size_t pick = dist.sample(rng);
        picked |= bit(static_cast<int>(pick));
        out.picks.push_back(pick);
    }
    out.selected = d.select(out.picks);
    return out;
}

CorrEstimate estimate_best_junta_corr(const BooleanFunction& f, const OracleSet& d, double eps,
                                      double delta, std::uint64_t seed,
                                      const CorrOptions& options) {
    if (!(eps > 0.0)) throw InputError("eps must be positive");
    check_unit_interval(delta, "correlation delta");
    const BoundedEvaluator a = implicit_junta(f, d, options.sampler);
    const int kp = a.arity();

    CorrEstimate out;
    out.points = options.points ? options.points : chernoff_samples(eps / 2.0, delta / 2.0);
    if (kp < 63 && (std::size_t{1} << kp) <= out.points) {
        out.enumerated = true;
        out.points = std::size_t{1} << kp;
    }
    out.reps = options.reps ? options.reps
                            : coefficient_samples(eps / 2.0,
                                                  delta / (2.0 * static_cast<double>(out.points)));
    std::vector<double> magnitudes(out.points, 0.0);
    parallel_for(out.points, [&](std::size_t p) {
        Rng rng = make_rng(derive_seed(seed, p));
        const Mask x = out.enumerated ? static_cast<Mask>(p) : random_point(rng, kp);
        long long sum = 0;
        for (std::size_t r = 0; r < out.reps; ++r) sum += a(x, rng);
        magnitudes[p] = std::abs(static_cast<double>(sum)) / static_cast<double>(out.reps);
    });
    double total = 0.0;
    for (double v : magnitudes) total += v;
    out.value = total / static_cast<double>(out.points);
    return out;
}

RelaxedResult relaxed_distance_estimate(const BooleanFunction& f, int k, double eps,
                                        std::uint64_t seed, const RelaxedOptions& options) {
    if (k < 1) throw InputError("k must be positive");
    if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
    check_unit_interval(options.delta, "delta");
    const std::shared_ptr<const OracleProvider> provider =
        options.provider ? options.provider : std::make_shared<SimulatedProvider>();

    RelaxedResult out;
    const std::uint64_t start = f.queries();
    OracleSet d;
    auto calls = [&d] { return d.oracle_calls(); };
    try {
        d = run_phase(out.phases, "provider", f, calls, [&](PhaseDiagnostic& diag) {
            OracleSet s = provider->provide(f, k, eps, derive_seed(seed, name_tag("provider")));
            diag.values["size"] = static_cast<double>(s.size());
            return s;
        });
        out.provider_size = d.size();
        const ReduceResult reduced =
            run_phase(out.phases, "reduce_oracles", f, calls, [&](PhaseDiagnostic& diag) {
                ReduceResult r = reduce_oracles(f, d, k, eps, options.delta / 2.0,
                                                derive_seed(seed, name_tag("reduce")),
                                                options.reduce);
                diag.values["rounds_planned"] = static_cast<double>(r.rounds_planned);
                diag.values["rounds_run"] = static_cast<double>(r.rounds_run);
                diag.values["zero_mass_rounds"] = static_cast<double>(r.zero_mass_rounds);
                diag.values["selected"] = static_cast<double>(r.selected.size());
                if (r.zero_mass_rounds) diag.notes.push_back("zero-mass rounds skipped");
                if (r.exhausted) diag.notes.push_back("every oracle picked before the last round");
                return r;
            });
        out.k_prime = reduced.selected.size();
        out.selected_coordinates = reduced.selected.target_mask();
        const CorrEstimate corr =
            run_phase(out.phases, "best_junta_corr", f, calls, [&](PhaseDiagnostic& diag) {
                CorrEstimate c = estimate_best_junta_corr(f, reduced.selected, eps,
                                                          options.delta / 2.0,
                                                          derive_seed(seed, name_tag("corr")),
                                                          options.corr);
                diag.values["points"] = static_cast<double>(c.points);
                diag.values["reps"] = static_cast<double>(c.reps);
                diag.values["enumerated"] = c.enumerated ? 1.0 : 0.0;
                return c;
            });
        out.correlation = corr.value;
        out.alpha = (1.0 - corr.value) / 2.0;
    } catch (const StageFailure& e) {
        out.failed_stage = out.phases.empty() ? e.stage() : out.phases.back().name;
        if (!out.phases.empty()) out.phases.back().notes.push_back(e.what());
        out.alpha = std::numeric_limits<double>::quiet_NaN();
        out.correlation = std::numeric_limits<double>::quiet_NaN();
    }
    out.query_count = f.queries() - start;
    return out;
}

}  // namespace junta
