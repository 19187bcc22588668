#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qpm {

// Runs `count` independent trials on up to `workers` threads and returns the
// results ordered by trial index. The callable must derive all randomness
// from the trial index so the outcome is identical for any worker count.
template <typename R>
std::vector<R> run_trials(std::size_t count, int workers, const std::function<R(std::size_t)>& fn) {
    std::vector<R> results(count);
    if (count == 0) return results;
    if (workers < 1) workers = 1;
    std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    if (w == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < count; i += w) results[i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

inline int hardware_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace qpm
