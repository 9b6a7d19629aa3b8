#pragma once

// Experiment configuration and JSON reports behind the junta_probe CLI.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "junta/boolfn.hpp"
#include "junta/diagnostics.hpp"

namespace junta {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
    std::string command;
    int n = 0;
    int k = 1;
    double eps = 0.1;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    bool plant = false;
    std::string fn;  // generator spec, see make_function
    std::string in;  // truth-table file
    std::string out;
    int threads = 0;

    // Oracle provider and confidence.
    double nu = 0.1;
    double delta = 0.01;

    // Budget knobs; zero or unset means derived from the accuracy targets.
    double loose = 1.0;
    std::size_t reduce_rounds = 0;
    std::size_t restrictions = 0;
    std::size_t coefficient_samples = 0;
    std::size_t corr_points = 0;
    std::size_t corr_reps = 0;
    std::size_t branch_r = 0;
    std::size_t branch_restrictions = 0;
    std::size_t branch_samples = 0;
    std::size_t phase_two_t = 0;
    std::size_t phase_two_samples = 0;
    std::optional<int> kappa_override;
    std::optional<int> depth_override;
};

/// Throws InputError on anything inconsistent; called before any query.
void validate(const ExperimentConfig& config);

/// Knob names that take the run off the declared guarantees.
std::vector<std::string> off_spec_knobs(const ExperimentConfig& config);

nlohmann::json config_json(const ExperimentConfig& config);
nlohmann::json phase_json(const PhaseDiagnostic& phase);

/// Seed streams: the planted instance draws from derive_seed(seed, "plant"),
/// estimators from the seed itself (phases split it further by name).
std::uint64_t instance_seed(std::uint64_t seed);

/// The function under test: planted instance, table file, or generator spec.
struct Subject {
    BooleanFunction f;
    std::optional<Mask> relevant;  // planted ground truth
};
Subject load_subject(const ExperimentConfig& config);

/// Runs an estimator command (relaxed-estimate, estimate-dist, mass, prune,
/// truth) and returns its report. Wall time is the only nondeterministic
/// field.
nlohmann::json run_experiment(const ExperimentConfig& config);

/// CSV spectrum dump: "mask,coefficient" rows sorted by mask, 12 significant
/// digits, then a "# parseval,<sum of squares>" footer.
std::string spectrum_csv(const BooleanFunction& f);

}  // namespace junta
