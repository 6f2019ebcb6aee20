#pragma once

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dtlab {

/// Worker count: DT_THREADS when set, otherwise the hardware concurrency.
/// Results must never depend on it; work items write to indexed slots.
inline unsigned worker_count() {
    if (const char* env = std::getenv("DT_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Runs f(i) for i in [0, count) across workers. Exceptions are captured and
/// the first one (by index) rethrown, so failures are deterministic too.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    unsigned workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace dtlab
