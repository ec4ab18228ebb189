#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace bcc::detail {

inline int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [0, count) into contiguous chunks, one worker per chunk; fn receives
// (chunk_index, begin, end). Work per item must be independent of the chunking
// for results to be deterministic.
template <typename Fn>
void parallel_chunks(int count, int threads, Fn&& fn) {
    threads = std::min(threads, count);
    if (threads <= 1) {
        fn(0, 0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int base = count / threads;
    const int extra = count % threads;
    int begin = 0;
    for (int w = 0; w < threads; ++w) {
        const int len = base + (w < extra ? 1 : 0);
        pool.emplace_back(fn, w, begin, begin + len);
        begin += len;
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace bcc::detail
