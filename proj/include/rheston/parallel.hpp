#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rheston {

/// Run fn(i) for i in [0, n) on up to n_threads workers (0 = hardware count).
/// Work items must be independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         std::size_t n_threads = 0) {
    if (n == 0) return;
    std::size_t workers = n_threads ? n_threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace rheston
