#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bubble {

/// Worker cap from BUBBLE_THREADS; unset, empty or 0 means sequential.
inline unsigned worker_count()
{
    const char* env = std::getenv("BUBBLE_THREADS");
    if (!env || !*env)
        return 1;
    try {
        const long n = std::stol(env);
        return n <= 0 ? 1u : static_cast<unsigned>(n);
    } catch (...) {
        return 1;
    }
}

/// Runs fn(i) for i in [0, n). Work is split in contiguous blocks; each index
/// is handled exactly once, so callers writing to slot i get results
/// identical to the sequential loop. The first exception thrown is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers = worker_count())
{
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::exception_ptr first;
    std::mutex guard;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t block = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * block;
        const std::size_t hi = std::min(n, lo + block);
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    fn(i);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!first)
                    first = std::current_exception();
            }
        });
    }
    pool.clear();
    if (first)
        std::rethrow_exception(first);
}

} // namespace bubble
