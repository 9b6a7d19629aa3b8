#pragma once

// Per-phase bookkeeping shared by the estimator pipelines, and the worker
// pool used to spread independent trials over threads.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "junta/boolfn.hpp"

namespace junta {

struct PhaseDiagnostic {
    std::string name;
    std::uint64_t queries = 0;       // evaluations of f charged to this phase
    std::uint64_t oracle_calls = 0;  // raw coordinate-oracle evaluations
    double wall_ms = 0.0;
    std::map<std::string, double> values;
    std::vector<std::string> notes;
};

/// Measures query and time deltas of one phase.
class PhaseScope {
public:
    PhaseScope(std::string name, const BooleanFunction& f,
               std::function<std::uint64_t()> oracle_calls = {});

    PhaseDiagnostic& diag() { return diag_; }

    /// Stops the clocks and returns the record.
    PhaseDiagnostic finish();

private:
    PhaseDiagnostic diag_;
    std::shared_ptr<QueryCounter> counter_;
    std::function<std::uint64_t()> oracle_calls_;
    std::uint64_t start_queries_ = 0;
    std::uint64_t start_oracle_ = 0;
    std::chrono::steady_clock::time_point start_;
};

/// Runs fn(diag) under a PhaseScope and appends the record to `phases`,
/// also when fn throws.
template <typename Fn>
auto run_phase(std::vector<PhaseDiagnostic>& phases, std::string name, const BooleanFunction& f,
               std::function<std::uint64_t()> oracle_calls, Fn&& fn) {
    PhaseScope scope(std::move(name), f, std::move(oracle_calls));
    try {
        auto result = fn(scope.diag());
        phases.push_back(scope.finish());
        return result;
    } catch (...) {
        phases.push_back(scope.finish());
        throw;
    }
}

/// Worker cap used by parallel_for; 0 means hardware concurrency. The
/// initial value comes from JUNTA_PROBE_THREADS when set.
int worker_threads();
void set_worker_threads(int threads);

/// Runs body(i) for i in [0, count). Bodies must only write to their own
/// slot and derive any randomness from i, so results do not depend on the
/// number of workers. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace junta
