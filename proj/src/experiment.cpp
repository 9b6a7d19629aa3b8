#include "junta/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "junta/errors.hpp"
#include "junta/exactref.hpp"
#include "junta/fourier.hpp"
#include "junta/prune.hpp"
#include "junta/subexp.hpp"

namespace junta {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"gen",   "fourier",        "truth", "relaxed-estimate",
                                            "estimate-dist", "mass", "prune"};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json coordinate_list(Mask m) {
    json out = json::array();
    for (int j : bit_positions(m)) out.push_back(j + 1);
    return out;
}

json optional_stage(const std::optional<std::string>& stage) {
    return stage ? json(*stage) : json(nullptr);
}

json phases_json(const std::vector<PhaseDiagnostic>& phases) {
    json out = json::array();
    for (const auto& p : phases) out.push_back(phase_json(p));
    return out;
}

bool exact_available(const BooleanFunction& f) {
    return f.has_table() && f.arity() <= kExactMaxArity;
}

EstimatorBudget reduce_budget(const ExperimentConfig& c) {
    EstimatorBudget b;
    b.loose = c.loose;
    b.restrictions = c.restrictions;
    b.coefficient_samples = c.coefficient_samples;
    return b;
}

ReduceOptions reduce_options(const ExperimentConfig& c) {
    ReduceOptions o;
    o.rounds = c.reduce_rounds;
    o.budget = reduce_budget(c);
    return o;
}

std::shared_ptr<const OracleProvider> provider_for(const ExperimentConfig& c) {
    SimulatedProvider::Options o;
    o.nu = c.nu;
    return std::make_shared<SimulatedProvider>(o);
}

DistanceOptions distance_options(const ExperimentConfig& c) {
    DistanceOptions o;
    o.provider = provider_for(c);
    o.reduce = reduce_options(c);
    o.branch.r = c.branch_r;
    o.branch.kappa = c.kappa_override;
    o.branch.depth = c.depth_override;
    o.branch.budget.loose = c.loose;
    o.branch.budget.restrictions = c.branch_restrictions;
    o.branch.budget.coefficient_samples = c.branch_samples;
    o.phase_two.t = c.phase_two_t;
    o.phase_two.samples = c.phase_two_samples;
    o.phase_two.loose = c.loose;
    return o;
}

json relaxed_report(const ExperimentConfig& c, const Subject& s, json report) {
    RelaxedOptions o;
    o.provider = provider_for(c);
    o.delta = c.delta;
    o.reduce = reduce_options(c);
    o.corr.points = c.corr_points;
    o.corr.reps = c.corr_reps;
    const RelaxedResult r = relaxed_distance_estimate(s.f, c.k, c.eps, c.seed, o);
    report["alpha"] = number_or_null(r.alpha);
    report["correlation"] = number_or_null(r.correlation);
    report["k_prime"] = r.k_prime;
    report["provider_size"] = r.provider_size;
    report["selected_coordinates"] = coordinate_list(r.selected_coordinates);
    report["query_count"] = r.query_count;
    report["phase_diagnostics"] = phases_json(r.phases);
    report["failed_stage"] = optional_stage(r.failed_stage);
    if (exact_available(s.f)) {
        const FourierSpectrum spec = wht(s.f);
        const double dk = exact_dist_to_juntas(spec, c.k).distance;
        const int kp = std::max<int>(1, static_cast<int>(r.k_prime));
        const double dkp = exact_dist_to_juntas(spec, std::min(kp, s.f.arity())).distance;
        json truth;
        truth["distance_k"] = dk;
        truth["distance_k_prime"] = dkp;
        truth["upper_ok"] = std::isfinite(r.alpha) && r.alpha <= dk + c.eps;
        truth["lower_ok"] = std::isfinite(r.alpha) && r.alpha >= dkp - c.eps;
        report["truth"] = truth;
    }
    return report;
}

json distance_report(const ExperimentConfig& c, const Subject& s, json report, bool mass) {
    const DistanceOptions o = distance_options(c);
    const DistanceResult r = mass ? mass_estimate(s.f, c.k, c.eps, c.seed, o)
                                  : distance_estimate(s.f, c.k, c.eps, c.seed, o);
    if (mass) {
        report["mass"] = number_or_null(r.estimate);
    } else {
        report["alpha"] = number_or_null(r.alpha);
    }
    report["c_tilde"] = number_or_null(r.c_tilde);
    report["best_set"] = r.best_set;
    report["best_set_coordinates"] = coordinate_list(r.best_set);
    report["candidates_examined"] = r.candidates_examined;
    report["branch_leaves"] = r.branch_leaves;
    report["kappa"] = r.kappa;
    report["k_prime"] = r.k_prime;
    report["provider_size"] = r.provider_size;
    report["query_count"] = r.query_count;
    report["exhaustive_baseline"] =
        std::ldexp(binomial(s.f.arity(), std::min(c.k, s.f.arity())), s.f.arity());
    report["phase_diagnostics"] = phases_json(r.phases);
    report["failed_stage"] = optional_stage(r.failed_stage);
    if (exact_available(s.f)) {
        json truth;
        if (mass) {
            const BestMass m = exact_subset_mass(s.f, c.k);
            truth["mass"] = m.mass;
            truth["set"] = coordinate_list(m.set);
            truth["abs_error"] = number_or_null(std::abs(r.estimate - m.mass));
        } else {
            const BestJunta b = exact_dist_to_juntas(s.f, c.k);
            truth["distance"] = b.distance;
            truth["set"] = coordinate_list(b.set);
            truth["abs_error"] = number_or_null(std::abs(r.alpha - b.distance));
        }
        report["truth"] = truth;
    }
    return report;
}

json prune_report(const ExperimentConfig& c, const Subject& s, json report) {
    const BooleanFunction& f = s.f;
    const std::uint64_t start = f.queries();
    std::vector<PhaseDiagnostic> phases;
    OracleSet d;
    auto calls = [&d] { return d.oracle_calls(); };
    std::optional<std::string> failed;
    ReduceResult reduced;
    try {
        d = run_phase(phases, "provider", f, calls, [&](PhaseDiagnostic& diag) {
            OracleSet out = provider_for(c)->provide(f, c.k, c.eps,
                                                     derive_seed(c.seed, name_tag("provider")));
            diag.values["size"] = static_cast<double>(out.size());
            return out;
        });
        reduced = run_phase(phases, "reduce_oracles", f, calls, [&](PhaseDiagnostic& diag) {
            ReduceResult r = reduce_oracles(f, d, c.k, c.eps, c.delta,
                                            derive_seed(c.seed, name_tag("reduce")),
                                            reduce_options(c));
            diag.values["rounds_planned"] = static_cast<double>(r.rounds_planned);
            diag.values["rounds_run"] = static_cast<double>(r.rounds_run);
            diag.values["zero_mass_rounds"] = static_cast<double>(r.zero_mass_rounds);
            return r;
        });
    } catch (const StageFailure& e) {
        failed = phases.empty() ? e.stage() : phases.back().name;
        if (!phases.empty()) phases.back().notes.push_back(e.what());
    }
    report["provider_size"] = d.size();
    report["k_prime"] = reduced.selected.size();
    report["selected_coordinates"] = coordinate_list(reduced.selected.target_mask());
    report["rounds_run"] = reduced.rounds_run;
    report["zero_mass_rounds"] = reduced.zero_mass_rounds;
    report["query_count"] = f.queries() - start;
    report["phase_diagnostics"] = phases_json(phases);
    report["failed_stage"] = optional_stage(failed);
    if (exact_available(f) && !failed) {
        const FourierSpectrum spec = wht(f);
        const Mask selected = reduced.selected.target_mask();
        const int size = std::min(c.k, popcount(selected));
        double best_on_selected = std::abs(spec[0]);
        for (Mask t : subsets_of_size_within(selected, size)) {
            best_on_selected = std::max(best_on_selected, exact_corr_on(spec, t));
        }
        json truth;
        truth["best_correlation"] = exact_dist_to_juntas(spec, c.k).correlation;
        truth["best_correlation_on_selected"] = best_on_selected;
        report["truth"] = truth;
    }
    return report;
}

json truth_report(const ExperimentConfig& c, const Subject& s, json report) {
    if (!s.f.has_table()) throw UnsupportedError("truth needs a truth table");
    const FourierSpectrum spec = wht(s.f);
    const BestJunta b = exact_dist_to_juntas(spec, c.k);
    const BestMass m = exact_subset_mass(spec, c.k);
    report["distance"] = b.distance;
    report["correlation"] = b.correlation;
    report["best_set"] = b.set;
    report["best_set_coordinates"] = coordinate_list(b.set);
    report["mass"] = m.mass;
    report["mass_set_coordinates"] = coordinate_list(m.set);
    json lambdas = json::array();
    json influences = json::array();
    for (int i = 1; i <= spec.n; ++i) {
        lambdas.push_back(exact_lambda(spec, i, c.k));
        influences.push_back(influence(spec, i, c.k));
    }
    report["lambda"] = lambdas;
    report["low_degree_influence"] = influences;
    report["query_count"] = s.f.queries();
    return report;
}

}  // namespace

void validate(const ExperimentConfig& c) {
    if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
        throw InputError("unknown command '" + c.command + "'");
    }
    const int sources = (c.plant ? 1 : 0) + (c.fn.empty() ? 0 : 1) + (c.in.empty() ? 0 : 1);
    if (sources != 1) throw InputError("give exactly one of --plant, --fn, --in");
    if (c.in.empty() && (c.n < 1 || c.n > kMaxArity)) {
        throw InputError("--n must lie in [1, " + std::to_string(kMaxArity) + "]");
    }
    if (c.k < 1) throw InputError("--k must be positive");
    if (c.plant && c.k > c.n) throw InputError("--k must not exceed --n");
    if (!(c.gamma >= 0.0 && c.gamma < 0.5)) throw InputError("--gamma must lie in [0, 1/2)");
    if (!c.plant && c.gamma != 0.0) throw InputError("--gamma needs --plant");
    const bool estimator = c.command != "gen" && c.command != "fourier" && c.command != "truth";
    if (estimator && !(c.eps > 0.0 && c.eps < 0.5)) throw InputError("--eps must lie in (0, 1/2)");
    if (!(c.nu >= 0.0 && c.nu < 0.25)) throw InputError("--nu must lie in [0, 1/4)");
    if (!(c.delta > 0.0 && c.delta < 1.0)) throw InputError("--delta must lie in (0, 1)");
    if (!(c.loose > 0.0)) throw InputError("--loose must be positive");
    if (c.threads < 0) throw InputError("--threads must be non-negative");
    if (c.kappa_override && (*c.kappa_override < 1 || *c.kappa_override > c.k)) {
        throw InputError("--kappa-override must lie in [1, k]");
    }
    if (c.depth_override && *c.depth_override < 0) {
        throw InputError("--branch-depth-override must be non-negative");
    }
}

std::vector<std::string> off_spec_knobs(const ExperimentConfig& c) {
    std::vector<std::string> out;
    if (c.loose != 1.0) out.push_back("loose");
    if (c.reduce_rounds) out.push_back("reduce_rounds");
    if (c.restrictions) out.push_back("restrictions");
    if (c.coefficient_samples) out.push_back("coefficient_samples");
    if (c.corr_points) out.push_back("corr_points");
    if (c.corr_reps) out.push_back("corr_reps");
    if (c.branch_r) out.push_back("branch_r");
    if (c.branch_restrictions) out.push_back("branch_restrictions");
    if (c.branch_samples) out.push_back("branch_samples");
    if (c.phase_two_t) out.push_back("phase_two_t");
    if (c.phase_two_samples) out.push_back("phase_two_samples");
    if (c.kappa_override) out.push_back("kappa_override");
    if (c.depth_override) out.push_back("branch_depth_override");
    return out;
}

json config_json(const ExperimentConfig& c) {
    json j;
    j["command"] = c.command;
    j["n"] = c.n;
    j["k"] = c.k;
    j["eps"] = c.eps;
    j["gamma"] = c.gamma;
    j["seed"] = c.seed;
    j["plant"] = c.plant;
    j["fn"] = c.fn;
    j["in"] = c.in;
    j["nu"] = c.nu;
    j["delta"] = c.delta;
    j["loose"] = c.loose;
    j["reduce_rounds"] = c.reduce_rounds;
    j["restrictions"] = c.restrictions;
    j["coefficient_samples"] = c.coefficient_samples;
    j["corr_points"] = c.corr_points;
    j["corr_reps"] = c.corr_reps;
    j["branch_r"] = c.branch_r;
    j["branch_restrictions"] = c.branch_restrictions;
    j["branch_samples"] = c.branch_samples;
    j["phase_two_t"] = c.phase_two_t;
    j["phase_two_samples"] = c.phase_two_samples;
    j["kappa_override"] = c.kappa_override ? json(*c.kappa_override) : json(nullptr);
    j["branch_depth_override"] = c.depth_override ? json(*c.depth_override) : json(nullptr);
    j["off_spec"] = off_spec_knobs(c);
    return j;
}

json phase_json(const PhaseDiagnostic& p) {
    json j;
    j["name"] = p.name;
    j["queries"] = p.queries;
    j["oracle_calls"] = p.oracle_calls;
    j["wall_ms"] = p.wall_ms;
    json values = json::object();
    for (const auto& [key, v] : p.values) values[key] = number_or_null(v);
    j["values"] = values;
    j["notes"] = p.notes;
    return j;
}

std::uint64_t instance_seed(std::uint64_t seed) { return derive_seed(seed, name_tag("plant")); }

Subject load_subject(const ExperimentConfig& c) {
    if (c.plant) {
        PlantedInstance inst = plant_noisy_junta(c.n, c.k, c.gamma, instance_seed(c.seed));
        return {inst.realized, inst.relevant};
    }
    if (!c.in.empty()) return {read_table_file(c.in), std::nullopt};
    return {make_function(c.fn, c.n), std::nullopt};
}

json run_experiment(const ExperimentConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const Subject s = load_subject(config);
    ExperimentConfig c = config;
    c.n = s.f.arity();
    if (c.k > c.n && c.command != "gen" && c.command != "fourier") {
        throw InputError("--k must not exceed the arity");
    }
    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = c.command;
    report["seed"] = c.seed;
    report["config"] = config_json(c);
    if (s.relevant) report["planted_set"] = coordinate_list(*s.relevant);
    if (c.command == "relaxed-estimate") {
        report = relaxed_report(c, s, std::move(report));
    } else if (c.command == "estimate-dist") {
        report = distance_report(c, s, std::move(report), false);
    } else if (c.command == "mass") {
        report = distance_report(c, s, std::move(report), true);
    } else if (c.command == "prune") {
        report = prune_report(c, s, std::move(report));
    } else if (c.command == "truth") {
        report = truth_report(c, s, std::move(report));
    } else {
        throw InputError("command '" + c.command + "' does not produce a report");
    }
    report["wall_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string spectrum_csv(const BooleanFunction& f) {
    const FourierSpectrum spec = wht(f);
    std::ostringstream out;
    out << "mask,coefficient\n";
    char buf[64];
    for (Mask s = 0; s < spec.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%.12g", spec[s] == 0.0 ? 0.0 : spec[s]);
        out << s << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.12g", spec.total_weight());
    out << "# parseval," << buf << '\n';
    return out.str();
}

}  // namespace junta
