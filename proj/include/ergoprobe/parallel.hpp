#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ergoprobe {

// Worker count from ERGOPROBE_PARALLELISM, else the hardware thread count.
unsigned worker_count();

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index runs exactly once;
// callers write results into slot i, so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const unsigned k = workers < n ? workers : unsigned(n);
        for (unsigned t = 0; t < k; ++t)
            pool.emplace_back(body);
    }
    if (error)
        std::rethrow_exception(error);
}

}  // namespace ergoprobe
