#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace wglab {

// Runs fn(chunk_index) for chunk_index in [0, chunk_count) on `workers`
// threads.  Chunks are claimed from a shared counter, so scheduling is
// nondeterministic, but each chunk's result must depend only on its index;
// callers merge per-chunk results in index order, which makes every
// reduction independent of the worker count.
template <typename Fn>
void for_each_chunk(std::size_t chunk_count, unsigned workers, Fn&& fn) {
    if (chunk_count == 0) return;
    if (workers <= 1 || chunk_count == 1) {
        for (std::size_t i = 0; i < chunk_count; ++i) fn(i);
        return;
    }
    if (workers > chunk_count) workers = static_cast<unsigned>(chunk_count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= chunk_count) break;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

inline unsigned default_worker_count() {
    if (const char* env = std::getenv("WGLAB_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

} // namespace wglab
