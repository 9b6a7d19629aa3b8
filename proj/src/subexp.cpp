#include "junta/subexp.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "junta/errors.hpp"
#include "junta/exactref.hpp"

namespace junta {

namespace {

constexpr std::size_t kTrialChunk = 2048;

void check_delta(double delta, const char* what) {
    if (!(delta > 0.0 && delta < 1.0)) throw InputError(std::string(what) + " must lie in (0, 1)");
}

double binomial_prefix(int n, int cap) {
    double total = 0.0;
    for (int j = 0; j <= std::min(n, cap); ++j) total += binomial(n, j);
    return total;
}

}  // namespace

double SetLambdaEstimates::at(Mask u) const {
    const auto it = std::lower_bound(sets.begin(), sets.end(), u);
    if (it == sets.end() || *it != u) throw InputError("no set lambda for " + format_set(u));
    return values[static_cast<std::size_t>(it - sets.begin())];
}

SetLambdaEstimates estimate_set_lambdas(const BoundedEvaluator& a, int kappa, int k,
                                        double accuracy, double delta, std::uint64_t seed,
                                        const LambdaOptions& options) {
    if (k < 1) throw InputError("k must be positive");
    if (kappa < 1) throw InputError("kappa must be positive");
    if (!(accuracy > 0.0)) throw InputError("lambda accuracy must be positive");
    check_delta(delta, "lambda delta");
    if (!(options.budget.loose > 0.0)) throw InputError("loose factor must be positive");
    const int kp = a.arity();
    const Restriction frame = options.frame.value_or(Restriction{low_bits(kp), 0});
    if (frame.live & ~low_bits(kp)) throw InputError("lambda frame exceeds the evaluator arity");

    SetLambdaEstimates out;
    out.kappa = kappa;
    out.p = 1.0 - 1.0 / (2.0 * kappa);
    out.levels = set_lambda_levels(kappa, k);
    out.accuracy = accuracy;
    out.delta = delta;
    out.sets = subsets_of_size_within(frame.live, kappa);
    std::sort(out.sets.begin(), out.sets.end());
    out.values.assign(out.sets.size(), 0.0);

    const int levels = out.levels;
    const double acc = accuracy * options.budget.loose;
    const double keys = std::max<double>(1.0, static_cast<double>(out.sets.size()));
    out.restrictions = options.budget.restrictions
                           ? options.budget.restrictions
                           : chernoff_samples(acc / (2.0 * levels), delta / (2.0 * keys * levels));
    const double width = keys * static_cast<double>(out.restrictions) * levels;
    out.coefficient_samples = options.budget.coefficient_samples
                                  ? options.budget.coefficient_samples
                                  : coefficient_samples(acc / (6.0 * levels), delta / (2.0 * width));
    if (out.sets.empty()) return out;

    std::unordered_map<Mask, std::size_t> index;
    for (std::size_t i = 0; i < out.sets.size(); ++i) index.emplace(out.sets[i], i);

    const std::size_t m = out.restrictions;
    const std::size_t trials = m * static_cast<std::size_t>(levels);
    std::vector<double> level_sum(out.sets.size(), 0.0);
    std::vector<std::vector<std::pair<std::size_t, double>>> squares(std::min(trials, kTrialChunk));
    for (std::size_t begin = 0; begin < trials; begin += kTrialChunk) {
        const std::size_t count = std::min(kTrialChunk, trials - begin);
        parallel_for(count, [&](std::size_t slot) {
            const std::size_t trial = begin + slot;
            const int d = static_cast<int>(trial / m);
            Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(d), trial % m));
            const Mask j = random_subset(rng, frame.live, std::pow(out.p, d));
            const Restriction r{j, (frame.fixed & ~frame.live) | (rng() & frame.live & ~j)};
            const std::vector<Mask> sets = subsets_of_size_within(j, kappa);
            std::vector<std::pair<std::size_t, double>> local;
            if (!sets.empty()) {
                const auto coeffs =
                    estimate_restricted_coefficients(a, r, sets, out.coefficient_samples, rng);
                for (std::size_t t = 0; t < sets.size(); ++t) {
                    local.emplace_back(index.at(sets[t]), coeffs[t] * coeffs[t]);
                }
            }
            squares[slot] = std::move(local);
        });
        for (std::size_t slot = 0; slot < count; ++slot) {
            for (const auto& [i, sq] : squares[slot]) out.values[i] += sq;
        }
    }
    for (double& v : out.values) v /= static_cast<double>(m);
    return out;
}

NodeSamples branch_node_samples(const BoundedEvaluator& a, Mask picked, int kappa, int k,
                                double accuracy, double delta, std::size_t r, std::uint64_t seed,
                                const EstimatorBudget& budget) {
    const Mask all = low_bits(a.arity());
    if (picked & ~all) throw InputError("picked members exceed the evaluator arity");
    NodeSamples out;
    Rng rng = make_rng(derive_seed(seed, name_tag("z")));
    out.z = rng() & picked;
    LambdaOptions lo;
    lo.frame = Restriction{all & ~picked, out.z};
    lo.budget = budget;
    out.lambdas = estimate_set_lambdas(a, kappa, k, accuracy, delta,
                                       derive_seed(seed, name_tag("lambdas")), lo);
    const SamplingDistribution dist(out.lambdas.values);
    if (dist.zero_mass()) {
        out.zero_mass = true;
        return out;
    }
    for (std::size_t i = 0; i < r; ++i) out.picks.push_back(out.lambdas.sets[dist.sample(rng)]);
    return out;
}

int distance_kappa(int k, double eps) {
    return std::max(1, static_cast<int>(std::ceil(std::sqrt(eps * k))));
}

int mass_kappa(int k) { return std::max(1, static_cast<int>(std::ceil(std::sqrt(k)))); }

BranchResult branching_process(const BooleanFunction& f, const OracleSet& d, int k, double eps,
                               double delta, std::uint64_t seed, const BranchOptions& options) {
    if (k < 1) throw InputError("k must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
    check_delta(delta, "branch delta");
    BranchResult out;
    out.kappa = options.kappa.value_or(distance_kappa(k, eps));
    if (out.kappa < 1 || out.kappa > k) throw InputError("kappa must lie in [1, k]");
    out.alpha = (k + out.kappa - 1) / out.kappa;
    out.depth_cap = options.depth.value_or(
        3 * out.alpha + static_cast<int>(std::ceil(std::log2(2.0 / delta))));
    if (out.depth_cap < 0) throw InputError("branch depth must be non-negative");
    if (!(options.r_constant > 0.0)) throw InputError("branch r constant must be positive");
    out.r = options.r ? options.r : clamp_count(std::ceil(options.r_constant / (eps * eps)));
    out.log_tree_bound = std::log(2.0) + out.depth_cap * std::log(static_cast<double>(out.r) + 1.0);

    const std::size_t kp = d.size();
    const Mask all = low_bits(static_cast<int>(kp));
    const double node_log_delta = std::log(delta / 2.0) - out.log_tree_bound;
    const double node_delta = std::exp(std::max(node_log_delta, std::log(DBL_MIN)));
    const double keys = std::max(1.0, binomial(static_cast<int>(kp), out.kappa));
    const double accuracy = eps * eps / (48.0 * keys);

    std::set<Mask> leaves;
    std::set<Mask> frontier{0};
    std::optional<BoundedEvaluator> a;
    for (int t = 0; !frontier.empty(); ++t) {
        std::set<Mask> next;
        for (Mask node : frontier) {
            const int size = popcount(node);
            if (t >= out.depth_cap || size > k - out.kappa ||
                popcount(all & ~node) < out.kappa) {
                leaves.insert(node);
                continue;
            }
            if (!a) a = implicit_junta(f, d, options.sampler);
            ++out.nodes_expanded;
            const NodeSamples ns =
                branch_node_samples(*a, node, out.kappa, k, accuracy, node_delta, out.r,
                                    derive_seed(seed, static_cast<std::uint64_t>(t), node),
                                    options.budget);
            next.insert(node);
            if (ns.zero_mass) ++out.zero_mass_nodes;
            for (Mask m : ns.picks) next.insert(node | m);
        }
        frontier = std::move(next);
    }
    out.leaves.assign(leaves.begin(), leaves.end());
    return out;
}

double phase_two_rho(int k, double eps) { return 1.0 - std::sqrt(eps / k); }

int phase_two_zeta(int k, double eps) {
    return static_cast<int>(std::ceil(std::sqrt(k / eps) * std::log(2.0 / eps)));
}

namespace {

// Score of one candidate from the coefficients of the restriction on
// `rest`; `local` is indexed by masks compressed to `rest`.
double candidate_score(const std::vector<double>& local, Mask rest, Mask w, bool mass, int cap,
                       double rho) {
    const int m = popcount(w);
    const std::size_t cube = std::size_t{1} << m;
    if (mass) {
        double total = 0.0;
        for (Mask v = 0; v < cube; ++v) {
            if (popcount(v) > cap) continue;
            const double c = local[compress_bits(expand_bits(v, w), rest)];
            total += c * c;
        }
        return total;
    }
    std::vector<double> values(cube, 0.0);
    for (Mask v = 0; v < cube; ++v) {
        const int level = popcount(v);
        if (level > cap) continue;
        values[v] = local[compress_bits(expand_bits(v, w), rest)] * std::pow(rho, level);
    }
    wht_butterfly(values);
    return mean_abs(values);
}

}  // namespace

PhaseTwoResult phase_two(const BooleanFunction& f, const OracleSet& d, Mask b, int k, double eps,
                         double delta, std::uint64_t seed, const PhaseTwoOptions& options) {
    if (k < 1) throw InputError("k must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0, 1)");
    check_delta(delta, "phase-two delta");
    if (!(options.loose > 0.0)) throw InputError("loose factor must be positive");
    const std::size_t kp = d.size();
    if (kp > 24) throw UnsupportedError("phase two over more than 24 oracles");
    const Mask all = low_bits(static_cast<int>(kp));
    if (b & ~all) throw InputError("B exceeds the oracle set");
    const int size = std::min<int>(k, static_cast<int>(kp));
    if (popcount(b) > size) throw InputError("B is larger than k");

    PhaseTwoResult out;
    out.rho = options.mass ? 1.0 : phase_two_rho(k, eps);
    out.zeta = phase_two_zeta(k, eps);
    const int cap = options.mass ? options.mass_cutoff : out.zeta;
    if (options.mass && cap < 0) throw InputError("mass cutoff must be non-negative");

    const Mask rest = all & ~b;
    const int free_size = size - popcount(b);
    std::vector<Mask> ws = subsets_of_size_within(rest, free_size);
    for (Mask w : ws) out.candidates.emplace_back(b | w, 0.0);

    if (!(options.t_constant > 0.0)) throw InputError("phase-two t constant must be positive");
    out.t = options.t ? options.t
                      : clamp_count(std::ceil(options.t_constant * std::log(1.0 / delta) /
                                              (eps * eps)));
    const int bsize = popcount(b);
    if (bsize < 63 && (std::size_t{1} << bsize) <= out.t) {
        out.enumerated = true;
        out.t = std::size_t{1} << bsize;
    }
    const double per_candidate = binomial_prefix(free_size, cap);
    const double estimated = binomial_prefix(popcount(rest), cap);
    out.samples = options.samples
                      ? options.samples
                      : coefficient_samples(options.loose * eps / per_candidate,
                                            delta / (static_cast<double>(out.t) * estimated));

    const BoundedEvaluator a = implicit_junta(f, d, options.sampler);
    std::vector<std::vector<double>> scores(out.t);
    parallel_for(out.t, [&](std::size_t zi) {
        Rng rng = make_rng(derive_seed(seed, zi));
        const Mask z = out.enumerated ? expand_bits(static_cast<Mask>(zi), b) : (rng() & b);
        const auto local = estimate_local_spectrum(a, Restriction{rest, z}, out.samples, rng);
        std::vector<double> row(ws.size());
        for (std::size_t i = 0; i < ws.size(); ++i) {
            row[i] = candidate_score(local, rest, ws[i], options.mass, cap, out.rho);
        }
        scores[zi] = std::move(row);
    });
    for (const auto& row : scores) {
        for (std::size_t i = 0; i < row.size(); ++i) out.candidates[i].second += row[i];
    }
    out.value = -std::numeric_limits<double>::infinity();
    for (auto& [u, v] : out.candidates) {
        v /= static_cast<double>(out.t);
        if (v > out.value) {
            out.value = v;
            out.best = u;
        }
    }
    return out;
}

double exact_phase_two_value(const FourierSpectrum& spec, Mask b, Mask u, double rho, int zeta) {
    if ((b & ~u) || (u & ~low_bits(spec.n))) throw InputError("need B inside U inside [n]");
    const Mask w = u & ~b;
    const int bs = popcount(b);
    const int ws = popcount(w);
    // rows[s][z] = coefficient of chi_s in f restricted to B -> z
    std::vector<std::vector<double>> rows(std::size_t{1} << ws);
    for (Mask s = 0; s < rows.size(); ++s) {
        std::vector<double> col(std::size_t{1} << bs);
        for (Mask r = 0; r < col.size(); ++r) {
            col[r] = spec.coeffs[expand_bits(s, w) | expand_bits(r, b)];
        }
        wht_butterfly(col);
        rows[s] = std::move(col);
    }
    double total = 0.0;
    const std::size_t zs = std::size_t{1} << bs;
    for (Mask z = 0; z < zs; ++z) {
        std::vector<double> values(rows.size(), 0.0);
        for (Mask s = 0; s < rows.size(); ++s) {
            const int level = popcount(s);
            if (level <= zeta) values[s] = rows[s][z] * std::pow(rho, level);
        }
        wht_butterfly(values);
        total += mean_abs(values);
    }
    return total / static_cast<double>(zs);
}

double exact_phase_two_mass(const FourierSpectrum& spec, Mask b, Mask u, int cutoff) {
    if ((b & ~u) || (u & ~low_bits(spec.n))) throw InputError("need B inside U inside [n]");
    const Mask w = u & ~b;
    const int bs = popcount(b);
    double total = 0.0;
    for (Mask s = 0; s < (std::size_t{1} << popcount(w)); ++s) {
        if (popcount(s) > cutoff) continue;
        // E_z of the squared restricted coefficient is the mass above it in B.
        for (Mask r = 0; r < (std::size_t{1} << bs); ++r) {
            const double c = spec.coeffs[expand_bits(s, w) | expand_bits(r, b)];
            total += c * c;
        }
    }
    return total;
}

namespace {

DistanceResult run_pipeline(const BooleanFunction& f, int k, double eps, std::uint64_t seed,
                            const DistanceOptions& options, bool mass) {
    if (k < 1) throw InputError("k must be positive");
    if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
    check_delta(options.stage_delta, "stage delta");
    const std::shared_ptr<const OracleProvider> provider =
        options.provider ? options.provider : std::make_shared<SimulatedProvider>();
    const double eps0 = eps / 6.0;
    const double sd = options.stage_delta;

    DistanceResult out;
    out.kappa = options.branch.kappa.value_or(mass ? mass_kappa(k) : distance_kappa(k, eps0));
    out.alpha = std::numeric_limits<double>::quiet_NaN();
    const std::uint64_t start = f.queries();
    OracleSet d;
    OracleSet pool;
    auto calls = [&d] { return d.oracle_calls(); };
    try {
        d = run_phase(out.phases, "provider", f, calls, [&](PhaseDiagnostic& diag) {
            OracleSet s = provider->provide(f, k, eps0, derive_seed(seed, name_tag("provider")));
            diag.values["size"] = static_cast<double>(s.size());
            return s;
        });
        out.provider_size = d.size();
        pool = run_phase(out.phases, "reduce_oracles", f, calls, [&](PhaseDiagnostic& diag) {
            ReduceResult r = reduce_oracles(f, d, k, eps0, sd, derive_seed(seed, name_tag("reduce")),
                                            options.reduce);
            diag.values["rounds_planned"] = static_cast<double>(r.rounds_planned);
            diag.values["rounds_run"] = static_cast<double>(r.rounds_run);
            diag.values["zero_mass_rounds"] = static_cast<double>(r.zero_mass_rounds);
            diag.values["selected"] = static_cast<double>(r.selected.size());
            if (r.exhausted) diag.notes.push_back("every oracle picked before the last round");
            return r.selected;
        });
        out.k_prime = pool.size();
        BranchOptions bo = options.branch;
        bo.kappa = out.kappa;
        const BranchResult branch =
            run_phase(out.phases, "branching", f, calls, [&](PhaseDiagnostic& diag) {
                BranchResult r = branching_process(f, pool, k, eps0, sd,
                                                   derive_seed(seed, name_tag("branch")), bo);
                diag.values["kappa"] = r.kappa;
                diag.values["depth_cap"] = r.depth_cap;
                diag.values["r"] = static_cast<double>(r.r);
                diag.values["nodes_expanded"] = static_cast<double>(r.nodes_expanded);
                diag.values["zero_mass_nodes"] = static_cast<double>(r.zero_mass_nodes);
                diag.values["leaves"] = static_cast<double>(r.leaves.size());
                diag.values["log_tree_bound"] = r.log_tree_bound;
                return r;
            });
        out.branch_leaves = branch.leaves.size();
        PhaseTwoOptions po = options.phase_two;
        po.mass = mass;
        po.mass_cutoff = out.kappa;
        const double leaf_delta = sd / static_cast<double>(std::max<std::size_t>(1, branch.leaves.size()));
        const PhaseTwoResult best =
            run_phase(out.phases, "phase_two", f, calls, [&](PhaseDiagnostic& diag) {
                PhaseTwoResult winner;
                winner.value = -std::numeric_limits<double>::infinity();
                for (Mask leaf : branch.leaves) {
                    PhaseTwoResult r = phase_two(f, pool, leaf, k, eps0, leaf_delta,
                                                 derive_seed(seed, name_tag("phase-two"), leaf), po);
                    out.candidates_examined += r.candidates.size();
                    diag.values["t"] = std::max(diag.values["t"], static_cast<double>(r.t));
                    diag.values["samples"] = static_cast<double>(r.samples);
                    if (r.value > winner.value) winner = std::move(r);
                }
                diag.values["candidates"] = static_cast<double>(out.candidates_examined);
                return winner;
            });
        out.c_tilde = best.value;
        std::vector<std::size_t> members;
        for (int j : bit_positions(best.best)) members.push_back(static_cast<std::size_t>(j));
        out.best_set = pool.select(members).target_mask();
        if (mass) {
            out.estimate = best.value;
        } else {
            out.alpha = (1.0 - best.value) / 2.0;
            out.estimate = out.alpha;
        }
    } catch (const StageFailure& e) {
        out.failed_stage = out.phases.empty() ? e.stage() : out.phases.back().name;
        if (!out.phases.empty()) out.phases.back().notes.push_back(e.what());
        out.estimate = std::numeric_limits<double>::quiet_NaN();
        out.alpha = std::numeric_limits<double>::quiet_NaN();
        out.c_tilde = std::numeric_limits<double>::quiet_NaN();
    }
    out.query_count = f.queries() - start;
    return out;
}

}  // namespace

DistanceResult distance_estimate(const BooleanFunction& f, int k, double eps, std::uint64_t seed,
                                 const DistanceOptions& options) {
    return run_pipeline(f, k, eps, seed, options, false);
}

DistanceResult mass_estimate(const BooleanFunction& f, int k, double eps, std::uint64_t seed,
                             const DistanceOptions& options) {
    return run_pipeline(f, k, eps, seed, options, true);
}

}  // namespace junta
