// junta_probe: command-line front end for the junta estimators.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "junta/diagnostics.hpp"
#include "junta/errors.hpp"
#include "junta/experiment.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitUnsupported = 3;

void add_common(CLI::App* sub, junta::ExperimentConfig& c) {
    sub->add_option("--n", c.n, "arity");
    sub->add_option("--k", c.k, "junta size");
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_flag("--plant", c.plant, "planted noisy k-junta on n coordinates");
    sub->add_option("--gamma", c.gamma, "planted corruption rate");
    sub->add_option("--fn", c.fn,
                    "generator: const:+1 | dictator:i | parity:i,j | majority:m | "
                    "junta:i,j:+-+- | random:seed");
    sub->add_option("--in", c.in, "truth-table file");
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--threads", c.threads, "worker cap (0 = JUNTA_PROBE_THREADS or all cores)");
}

void add_estimator(CLI::App* sub, junta::ExperimentConfig& c) {
    sub->add_option("--eps", c.eps, "accuracy");
    sub->add_option("--nu", c.nu, "simulated oracle corruption rate");
    sub->add_option("--delta", c.delta, "failure probability (relaxed-estimate, prune)");
    sub->add_option("--loose", c.loose, "multiplies accuracy targets (off-spec when != 1)");
    sub->add_option("--reduce-rounds", c.reduce_rounds, "pruning rounds");
    sub->add_option("--restrictions", c.restrictions, "restrictions per level when pruning");
    sub->add_option("--coefficient-samples", c.coefficient_samples,
                    "calls per restricted estimate when pruning");
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw junta::InputError("cannot write " + path);
    out << text;
}

int fail(const std::string& kind, const std::string& message, int code) {
    nlohmann::json err;
    err["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump(2) << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tolerant junta testing and k-junta distance estimation"};
    app.require_subcommand(1);
    junta::ExperimentConfig c;

    auto* gen = app.add_subcommand("gen", "write a truth table");
    add_common(gen, c);
    auto* fourier = app.add_subcommand("fourier", "dump the Fourier spectrum as CSV");
    add_common(fourier, c);
    auto* truth = app.add_subcommand("truth", "exact distance, mass and lambdas");
    add_common(truth, c);

    auto* relaxed = app.add_subcommand("relaxed-estimate", "poly-query relaxed estimator");
    add_common(relaxed, c);
    add_estimator(relaxed, c);
    relaxed->add_option("--corr-points", c.corr_points, "x samples for the correlation estimate");
    relaxed->add_option("--corr-reps", c.corr_reps, "implicit evaluations per x");

    auto* prune = app.add_subcommand("prune", "provider plus oracle pruning only");
    add_common(prune, c);
    add_estimator(prune, c);

    for (const char* name : {"estimate-dist", "mass"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "mass"
                                                 ? "max k-subset Fourier mass"
                                                 : "distance to k-juntas");
        add_common(sub, c);
        add_estimator(sub, c);
        sub->add_option("--kappa-override", c.kappa_override, "branch set size");
        sub->add_option("--branch-depth-override", c.depth_override, "branch depth cap");
        sub->add_option("--branch-r", c.branch_r, "samples per branch node");
        sub->add_option("--branch-restrictions", c.branch_restrictions,
                        "restrictions per level at branch nodes");
        sub->add_option("--branch-samples", c.branch_samples,
                        "calls per restricted estimate at branch nodes");
        sub->add_option("--phase-two-t", c.phase_two_t, "z draws per leaf");
        sub->add_option("--phase-two-samples", c.phase_two_samples, "calls per z");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("invalid_config", e.what(), kExitInvalid);
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        if (c.threads > 0) junta::set_worker_threads(c.threads);
        if (c.command == "gen" || c.command == "fourier") {
            junta::validate(c);
            const junta::Subject s = junta::load_subject(c);
            if (c.command == "fourier") {
                emit(c.out, junta::spectrum_csv(s.f));
            } else if (c.out.empty()) {
                junta::write_table(std::cout, s.f);
            } else {
                junta::write_table_file(c.out, s.f);
            }
            return 0;
        }
        const nlohmann::json report = junta::run_experiment(c);
        emit(c.out, report.dump(2) + "\n");
        return 0;
    } catch (const junta::InputError& e) {
        return fail("invalid_config", e.what(), kExitInvalid);
    } catch (const junta::UnsupportedError& e) {
        return fail("unsupported_size", e.what(), kExitUnsupported);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 1);
    }
}
