#pragma once
// Index-parallel loop capped by HAUPTWERK_THREADS.
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hauptwerk {

inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HAUPTWERK_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(std::min<long>(v, hw));
    }
    return hw;
}

// Runs fn(i) for i in [0, n); results must be written to per-index slots.
template <class Fn>
void parallel_for(size_t n, Fn&& fn) {
    unsigned w = static_cast<unsigned>(std::min<size_t>(worker_count(), n));
    if (w <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < w; ++t)
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace hauptwerk
