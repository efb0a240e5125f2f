// Minimal deterministic work partitioning. Chunks of [0, count) are assigned
// contiguously to worker threads; callers must write results to disjoint
// per-index slots so the output is identical for every thread count.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rankscreen {

// Resolve a requested thread count: 0 means "use RANKSCREEN_THREADS if set,
// else 1". The result is always >= 1.
int resolve_threads(int requested);

inline void parallel_for_chunks(std::size_t count, int threads,
                                const std::function<void(std::size_t, std::size_t)>& run_chunk) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(std::max(threads, 1), count);
    if (workers <= 1) {
        run_chunk(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t base = count / workers;
    const std::size_t extra = count % workers;
    std::size_t begin = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&run_chunk, begin, end] { run_chunk(begin, end); });
        begin = end;
    }
    for (auto& t : pool) t.join();
}

inline void parallel_for_index(std::size_t count, int threads,
                               const std::function<void(std::size_t)>& run_index) {
    parallel_for_chunks(count, threads, [&run_index](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) run_index(i);
    });
}

}  // namespace rankscreen
