#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace coplay {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const auto hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs worker(chunk_index, begin, end) over fixed-size chunks of [0, n).
// The chunk grid depends only on chunk_size, never on the thread count, so
// callers that accumulate per chunk and reduce in chunk order get results
// that are bit-identical for any thread count.
inline void for_each_chunk(std::size_t n, std::size_t chunk_size, int threads,
                           const std::function<void(std::size_t, std::size_t, std::size_t)>& worker) {
    if (n == 0) return;
    const std::size_t chunk_count = (n + chunk_size - 1) / chunk_size;
    threads = resolve_threads(threads);
    if (threads == 1 || chunk_count == 1) {
        for (std::size_t c = 0; c < chunk_count; ++c)
            worker(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunk_count) return;
            worker(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        }
    };
    std::vector<std::thread> pool;
    const auto workers = static_cast<std::size_t>(threads) - 1;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
}

}  // namespace coplay
