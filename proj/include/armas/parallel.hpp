#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace armas {

// Worker cap: ARMAS_THREADS if set, else hardware concurrency.
inline unsigned thread_limit() {
    if (const char* env = std::getenv("ARMAS_THREADS")) {
        long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs body(i) for i in [0, count). Work items must write to disjoint slots;
// results are then independent of the thread count. Items are dealt round-robin
// so the assignment is a pure function of (count, workers).
inline void parallel_for(size_t count, const std::function<void(size_t)>& body) {
    unsigned workers = thread_limit();
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) body(i);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace armas
