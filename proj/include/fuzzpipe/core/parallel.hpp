#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace fuzzpipe::core {

// Worker count resolution order: explicit request, FUZZPIPE_WORKERS, hardware.
inline int default_workers() {
    if (const char* env = std::getenv("FUZZPIPE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Splits [0, n) into contiguous chunks, one per worker. The callable receives
// (begin, end) of its chunk and must only write to disjoint output regions.
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                            int workers = 0) {
    if (workers <= 0) workers = default_workers();
    if (n == 0) return;
    const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (nw <= 1) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(nw);
    const std::size_t chunk = (n + nw - 1) / nw;
    for (std::size_t w = 0; w < nw; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back(fn, begin, end);
    }
    for (auto& t : threads) t.join();
}

}  // namespace fuzzpipe::core
