#include "junta/diagnostics.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace junta {

PhaseScope::PhaseScope(std::string name, const BooleanFunction& f,
                       std::function<std::uint64_t()> oracle_calls)
    : counter_(f.counter()), oracle_calls_(std::move(oracle_calls)) {
    diag_.name = std::move(name);
    start_queries_ = counter_->value();
    start_oracle_ = oracle_calls_ ? oracle_calls_() : 0;
    start_ = std::chrono::steady_clock::now();
}

PhaseDiagnostic PhaseScope::finish() {
    diag_.queries = counter_->value() - start_queries_;
    diag_.oracle_calls = oracle_calls_ ? oracle_calls_() - start_oracle_ : 0;
    diag_.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
                        .count();
    return diag_;
}

namespace {

int threads_from_env() {
    if (const char* env = std::getenv("JUNTA_PROBE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;
}

std::atomic<int> g_threads{threads_from_env()};

}  // namespace

int worker_threads() {
    const int t = g_threads.load();
    if (t > 0) return t;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_worker_threads(int threads) { g_threads.store(threads < 0 ? 0 : threads); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_threads()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace junta
