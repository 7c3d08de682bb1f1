#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fracdrift {

/// FRACDRIFT_THREADS caps the worker count; defaults to the hardware
/// concurrency clamped to 8.
inline int thread_budget() {
    if (const char* env = std::getenv("FRACDRIFT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return int(hw ? std::min(hw, 8u) : 1u);
}

/// Runs body(chunk_index, begin, end) over [0,n) split into a fixed number of
/// chunks. Chunk boundaries are independent of the thread budget, so partial
/// sums indexed by chunk reduce to the same bits at any parallelism.
inline void parallel_chunks(std::size_t n, std::size_t n_chunks,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    n_chunks = std::max<std::size_t>(1, std::min(n_chunks, n));
    const std::size_t per = (n + n_chunks - 1) / n_chunks;
    const int workers = std::min<int>(thread_budget(), int(n_chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) {
            std::size_t b = c * per, e = std::min(n, b + per);
            if (b < e) body(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                std::size_t b = c * per, e = std::min(n, b + per);
                if (b < e) body(c, b, e);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fracdrift
